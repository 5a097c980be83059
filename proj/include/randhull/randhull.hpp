#pragma once

#include "randhull/bounds/containment.hpp"
#include "randhull/bounds/sample_count.hpp"
#include "randhull/cubature/cubature.hpp"
#include "randhull/dist/exact.hpp"
#include "randhull/dist/moments.hpp"
#include "randhull/dist/sample.hpp"
#include "randhull/dist/spec.hpp"
#include "randhull/estimators/containment.hpp"
#include "randhull/estimators/depth.hpp"
#include "randhull/geom/caratheodory.hpp"
#include "randhull/geom/epsilon_net.hpp"
#include "randhull/geom/min_norm.hpp"
#include "randhull/geom/subset_scan.hpp"
#include "randhull/geom/whiten.hpp"
#include "randhull/interior/interior.hpp"
#include "randhull/random/rng.hpp"
