#pragma once

#include "spectext/corpus.hpp"
#include "spectext/counts.hpp"
#include "spectext/error.hpp"
#include "spectext/format.hpp"
#include "spectext/paradigm.hpp"
#include "spectext/render.hpp"
#include "spectext/spectral.hpp"
#include "spectext/synth.hpp"
