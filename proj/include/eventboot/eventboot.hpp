#pragma once

#include "eventboot/bootstrap.hpp"
#include "eventboot/config.hpp"
#include "eventboot/corpus.hpp"
#include "eventboot/date.hpp"
#include "eventboot/embeddings.hpp"
#include "eventboot/eval.hpp"
#include "eventboot/jsonl.hpp"
#include "eventboot/pipeline.hpp"
#include "eventboot/runlog.hpp"
#include "eventboot/spike_cluster.hpp"
#include "eventboot/stopwords.hpp"
#include "eventboot/synth.hpp"
#include "eventboot/tagger.hpp"
#include "eventboot/tokenize.hpp"
#include "eventboot/types.hpp"
#include "eventboot/union_find.hpp"
#include "eventboot/util.hpp"
