#pragma once

#include "decide.hpp"
#include "element.hpp"
#include "eval.hpp"
#include "expressibility.hpp"
#include "formula.hpp"
#include "syntax.hpp"
#include "transducer.hpp"
