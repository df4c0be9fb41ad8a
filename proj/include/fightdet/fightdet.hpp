#pragma once

// Umbrella header for the fight-detection pipeline: frame sampling and
// resizing, feature ingestion, the LSTM / Bi-LSTM / Bi-LSTM+attention
// classifiers, and the training harness.

#include "fightdet/attention.hpp"
#include "fightdet/backbone.hpp"
#include "fightdet/checkpoint.hpp"
#include "fightdet/errors.hpp"
#include "fightdet/feature_io.hpp"
#include "fightdet/frame.hpp"
#include "fightdet/grad_check.hpp"
#include "fightdet/grid.hpp"
#include "fightdet/head.hpp"
#include "fightdet/lstm.hpp"
#include "fightdet/manifest.hpp"
#include "fightdet/mat.hpp"
#include "fightdet/model.hpp"
#include "fightdet/param_store.hpp"
#include "fightdet/ppm.hpp"
#include "fightdet/resize.hpp"
#include "fightdet/rng.hpp"
#include "fightdet/toy_extractor.hpp"
#include "fightdet/train.hpp"
