#pragma once

// Umbrella header for the full pipeline.

#include "imgrank/classify.hpp"
#include "imgrank/combine.hpp"
#include "imgrank/config.hpp"
#include "imgrank/dataset.hpp"
#include "imgrank/eval.hpp"
#include "imgrank/features.hpp"
#include "imgrank/graph.hpp"
#include "imgrank/image.hpp"
#include "imgrank/matrix_io.hpp"
#include "imgrank/nmf.hpp"
#include "imgrank/pca.hpp"
#include "imgrank/ranking.hpp"
#include "imgrank/synth.hpp"
