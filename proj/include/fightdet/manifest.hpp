#pragma once

#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "fightdet/errors.hpp"

namespace fightdet {

// Two-class labels: class 0 is nonfight, class 1 is fight.
inline int label_to_index(const std::string& label) {
    if (label == "nonfight") return 0;
    if (label == "fight") return 1;
    throw DataError("unknown label '" + label + "' (expected fight or nonfight)");
}

inline const char* index_to_label(int index) { return index == 0 ? "nonfight" : "fight"; }

struct ManifestItem {
    std::string id;
    std::string label;  // fight | nonfight
    std::string source; // frame directory or .fvs1 feature file
};

struct DatasetManifest {
    std::vector<ManifestItem> items;
};

// One record per line, UTF-8, tab-separated: id, label, source path.
inline DatasetManifest read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open manifest '" + path + "'");
    DatasetManifest m;
    std::set<std::string> ids;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t t1 = line.find('\t');
        const std::size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos)
            throw FormatError("'" + path + "' line " + std::to_string(line_no) +
                              ": expected 3 tab-separated fields");
        ManifestItem item;
        item.id = line.substr(0, t1);
        item.label = line.substr(t1 + 1, t2 - t1 - 1);
        item.source = line.substr(t2 + 1);
        if (item.id.empty() || item.source.empty())
            throw FormatError("'" + path + "' line " + std::to_string(line_no) +
                              ": empty id or source");
        label_to_index(item.label); // validates
        if (!ids.insert(item.id).second)
            throw DataError("manifest '" + path + "': duplicate id '" + item.id + "'");
        m.items.push_back(std::move(item));
    }
    return m;
}

inline void write_manifest(const DatasetManifest& m, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw FormatError("cannot write manifest '" + path + "'");
    for (const auto& item : m.items)
        out << item.id << '\t' << item.label << '\t' << item.source << '\n';
}

} // namespace fightdet
