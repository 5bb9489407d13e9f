#pragma once

#include "signed_graph.hpp"
#include "spanning.hpp"
#include "ggmz.hpp"
#include "grasp.hpp"
#include "lp.hpp"
#include "cuts.hpp"
#include "branch_and_cut.hpp"
#include "instances.hpp"
