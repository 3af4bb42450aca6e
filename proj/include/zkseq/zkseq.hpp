#pragma once

#include "zkseq/dissociation.hpp"
#include "zkseq/error.hpp"
#include "zkseq/mc_lab.hpp"
#include "zkseq/oracle.hpp"
#include "zkseq/pipeline.hpp"
#include "zkseq/pn_ordering.hpp"
#include "zkseq/rectification.hpp"
#include "zkseq/rng.hpp"
#include "zkseq/structure.hpp"
#include "zkseq/verify.hpp"
#include "zkseq/zk.hpp"
