// ============================================================================
// audit.hpp — randomized conformity audit of the admissible tensor subspace.
//
// Random coefficient vectors are projected onto the kernel of the constraint
// rows; for each projected field the audit samples interelement jumps of the
// normal trace tau*n and of Div tau . n, and the boundary values of t'tau n
// and Div tau . n (which the homogeneous constraints force to vanish).  The
// same quantities are sampled for the unprojected fields as a negative
// control — those must NOT be small, otherwise the audit itself is vacuous.
// ============================================================================
#pragma once

#include "chfem/mesh.hpp"

namespace chfem {

struct AuditReport {
    int fields = 0;
    int constraint_rows = 0;
    int constraint_rank = 0;          // dense QR rank; full row rank expected
    double max_admissible_jump = 0.0; // relative, over all admissible samples
    double min_control_jump = 0.0;    // smallest per-field maximum of the controls
};

AuditReport conformity_audit(const TriMesh& mesh, int n_fields, unsigned seed);

}  // namespace chfem
