#pragma once

// Two-step SDP preprocessing: chordal matrix-completion decomposition
// followed by iterative facial reduction, with a small primal-dual
// interior-point solver for verification.

#include "sdpprep/blockmat.hpp"
#include "sdpprep/chordal.hpp"
#include "sdpprep/decompose.hpp"
#include "sdpprep/facial.hpp"
#include "sdpprep/ipm.hpp"
#include "sdpprep/pipeline.hpp"
#include "sdpprep/problem.hpp"
#include "sdpprep/sdpa_io.hpp"
