#pragma once

#include "patchwork/errors.hpp"
#include "patchwork/pgl2.hpp"
#include "patchwork/geometry.hpp"
#include "patchwork/bipoly.hpp"
#include "patchwork/levels.hpp"
#include "patchwork/mesh.hpp"
#include "patchwork/tracer.hpp"
#include "patchwork/arrangement.hpp"
#include "patchwork/surface.hpp"
#include "patchwork/pipeline.hpp"
#include "patchwork/random_spec.hpp"
#include "patchwork/config.hpp"
#include "patchwork/report.hpp"
#include "patchwork/svg.hpp"
