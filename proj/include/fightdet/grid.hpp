#pragma once

#include <iomanip>
#include <optional>
#include <sstream>

#include "fightdet/train.hpp"

namespace fightdet {

// Experiment grid over (backbone, classifier, frame count), one
// train+evaluate per cell, reported as classifier rows by frame-count
// columns.

struct GridSpec {
    std::vector<std::string> backbones;
    std::vector<Variant> classifiers;
    std::vector<int> frame_counts; // subset of {5, 10}
};

inline void validate_grid(const GridSpec& grid) {
    if (grid.backbones.empty() || grid.classifiers.empty() || grid.frame_counts.empty())
        throw ParamError("grid: every axis needs at least one entry");
    for (int f : grid.frame_counts)
        if (f != 5 && f != 10)
            throw ParamError("grid: frame counts must be 5 or 10");
}

struct ResultTable {
    std::vector<std::string> row_labels; // "<backbone> + <classifier>"
    std::vector<int> frame_counts;
    std::vector<std::vector<std::optional<double>>> cells; // [row][frame column]
};

struct GridOptions {
    int hidden_size = 128;
    double dropout_rate = 0.5;
    std::uint64_t toy_seed = kToyDefaultSeed;
    NormalizeMode normalize = NormalizeMode::none;
    int fight_cnn_dim = 1024;
    int toy_dim = 64;
};

// Cells that cannot load their features are reported unavailable; the rest
// of the grid still runs. Cell seeds are cfg.seed + cell index.
inline ResultTable run_grid(const GridSpec& grid, const DatasetManifest& manifest,
                            const TrainConfig& cfg, const GridOptions& opt = {},
                            std::vector<std::string>* warnings = nullptr) {
    validate_grid(grid);
    SplitResult split = split_dataset(manifest, cfg.split_fraction, cfg.seed);
    if (warnings)
        warnings->insert(warnings->end(), split.warnings.begin(), split.warnings.end());

    ResultTable table;
    table.frame_counts = grid.frame_counts;
    std::uint64_t cell_index = 0;
    for (const std::string& backbone : grid.backbones) {
        const BackboneSpec spec = find_backbone(backbone, opt.fight_cnn_dim, opt.toy_dim);
        for (Variant variant : grid.classifiers) {
            table.row_labels.push_back(backbone + " + " + variant_name(variant));
            auto& row = table.cells.emplace_back();
            for (int frames : grid.frame_counts) {
                const std::uint64_t cell_seed = cfg.seed + cell_index++;
                try {
                    FeatureLoadOptions load;
                    load.backbone = backbone;
                    load.frames = frames;
                    load.dim = spec.feature_dim;
                    load.toy_seed = opt.toy_seed;
                    load.normalize = opt.normalize;

                    ModelConfig model;
                    model.variant = variant;
                    model.input_dim = spec.feature_dim;
                    model.hidden_size = opt.hidden_size;
                    model.frames = frames;
                    model.dropout_rate = opt.dropout_rate;
                    model.seed = cell_seed;

                    TrainConfig cell_cfg = cfg;
                    cell_cfg.frames = frames;
                    cell_cfg.seed = cell_seed;
                    if (cell_cfg.batch_size == 0)
                        cell_cfg.batch_size = default_batch_size(backbone);

                    LoadedDataset train_set = load_dataset(split.train, load);
                    LoadedDataset test_set = load_dataset(split.test, load);
                    TrainResult trained = train_model(model, train_set, cell_cfg);
                    MetricsReport report = evaluate_model(model, trained.params, test_set);
                    row.push_back(report.accuracy);
                } catch (const Error& e) {
                    if (warnings)
                        warnings->push_back(table.row_labels.back() + " @ " +
                                            std::to_string(frames) + " frames: " + e.what());
                    row.push_back(std::nullopt);
                }
            }
        }
    }
    return table;
}

inline std::string emit_table_tsv(const ResultTable& table) {
    std::ostringstream out;
    out << "model";
    for (int f : table.frame_counts) out << '\t' << f << " frames";
    out << '\n';
    out << std::fixed << std::setprecision(6);
    for (std::size_t r = 0; r < table.row_labels.size(); ++r) {
        out << table.row_labels[r];
        for (const auto& cell : table.cells[r]) {
            out << '\t';
            if (cell)
                out << *cell;
            else
                out << "n/a";
        }
        out << '\n';
    }
    return out.str();
}

inline ResultTable parse_table_tsv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw FormatError("result table: empty input");
    ResultTable table;
    {
        std::istringstream header(line);
        std::string field;
        if (!std::getline(header, field, '\t') || field != "model")
            throw FormatError("result table: header must start with 'model'");
        while (std::getline(header, field, '\t')) {
            const std::size_t sp = field.find(' ');
            if (sp == std::string::npos || field.substr(sp + 1) != "frames")
                throw FormatError("result table: bad frame column '" + field + "'");
            table.frame_counts.push_back(std::stoi(field.substr(0, sp)));
        }
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        if (!std::getline(row, field, '\t'))
            throw FormatError("result table: bad row '" + line + "'");
        table.row_labels.push_back(field);
        auto& cells = table.cells.emplace_back();
        while (std::getline(row, field, '\t')) {
            if (field == "n/a")
                cells.push_back(std::nullopt);
            else
                cells.push_back(std::stod(field));
        }
        if (cells.size() != table.frame_counts.size())
            throw FormatError("result table: row '" + table.row_labels.back() +
                              "' has the wrong cell count");
    }
    return table;
}

// Aligned plain-text rendering of the same table.
inline std::string render_table_text(const ResultTable& table) {
    std::size_t label_w = 5;
    for (const auto& l : table.row_labels) label_w = std::max(label_w, l.size());
    std::ostringstream out;
    out << std::left << std::setw(int(label_w) + 2) << "model";
    for (int f : table.frame_counts)
        out << std::right << std::setw(12) << (std::to_string(f) + " frames");
    out << '\n';
    for (std::size_t r = 0; r < table.row_labels.size(); ++r) {
        out << std::left << std::setw(int(label_w) + 2) << table.row_labels[r];
        for (const auto& cell : table.cells[r]) {
            std::ostringstream v;
            if (cell)
                v << std::fixed << std::setprecision(2) << (*cell * 100.0) << "%";
            else
                v << "n/a";
            out << std::right << std::setw(12) << v.str();
        }
        out << '\n';
    }
    return out.str();
}

} // namespace fightdet
