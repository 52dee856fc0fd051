#pragma once

#include "ury/rational.hpp"
#include "ury/metric.hpp"
#include "ury/labels.hpp"
#include "ury/prefix.hpp"
#include "ury/extension.hpp"
#include "ury/tight_span.hpp"
#include "ury/hull.hpp"
#include "ury/linf.hpp"
#include "ury/embed.hpp"
