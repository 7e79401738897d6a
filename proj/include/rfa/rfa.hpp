#pragma once

#include "rfa/error.hpp"
#include "rfa/infodyn.hpp"
#include "rfa/ingest.hpp"
#include "rfa/porter.hpp"
#include "rfa/synth.hpp"
#include "rfa/tensor.hpp"
#include "rfa/textpipe.hpp"
#include "rfa/vocab.hpp"
