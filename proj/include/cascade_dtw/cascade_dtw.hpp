#pragma once

#include "cascade_dtw/belief.hpp"
#include "cascade_dtw/corpus.hpp"
#include "cascade_dtw/dtw.hpp"
#include "cascade_dtw/errors.hpp"
#include "cascade_dtw/eval.hpp"
#include "cascade_dtw/ingest.hpp"
#include "cascade_dtw/io.hpp"
#include "cascade_dtw/knn.hpp"
#include "cascade_dtw/prnet.hpp"
#include "cascade_dtw/synth.hpp"
