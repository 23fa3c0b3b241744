#pragma once

#include "analysis.hpp"
#include "attack.hpp"
#include "crc16.hpp"
#include "errors.hpp"
#include "experiment.hpp"
#include "field.hpp"
#include "geometry.hpp"
#include "io.hpp"
#include "presets.hpp"
#include "quiz.hpp"
#include "random.hpp"
#include "search.hpp"
#include "secret.hpp"
#include "simulate.hpp"
#include "sweep.hpp"
#include "unlock.hpp"
#include "vault.hpp"
