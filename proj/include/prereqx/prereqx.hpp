#pragma once

#include "prereqx/classify.hpp"
#include "prereqx/corpus.hpp"
#include "prereqx/corpus_io.hpp"
#include "prereqx/dag_export.hpp"
#include "prereqx/eval.hpp"
#include "prereqx/pipeline.hpp"
#include "prereqx/prereq_matrix.hpp"
#include "prereqx/resolver.hpp"
#include "prereqx/textstats.hpp"
#include "prereqx/wiki_features.hpp"
