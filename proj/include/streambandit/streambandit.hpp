// streambandit.hpp
#pragma once
#include "errors.hpp"
#include "rng.hpp"
#include "instance.hpp"
#include "session.hpp"
#include "schedule.hpp"
#include "algorithms.hpp"
#include "trial.hpp"
#include "generators.hpp"
#include "infotheory.hpp"
#include "serialization.hpp"
#include "bench.hpp"
