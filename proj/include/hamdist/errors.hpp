// errors.hpp — Error hierarchy with stable codes (mirrored by the CLI exit codes)

#pragma once

#include <stdexcept>
#include <string>

namespace hamdist {

enum class ErrorCode : int {
    dimension_error          = 10,
    not_hermitian            = 11,
    not_traceless            = 12,
    not_distinct             = 13,
    functional_collision     = 14,
    infeasible_targets       = 15,
    singular_interpolation   = 16,
    zero_c                   = 17,
    plan_verification_failed = 18,
    decomposition_residual   = 19,
    nonzero_constant_term    = 20,
    nonpositive_time         = 21,
    budget_too_small         = 22,
    parse_error              = 23,
    not_unitary              = 24,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }
    int exit_code() const noexcept { return static_cast<int>(code_); }

private:
    ErrorCode code_;
};

#define HAMDIST_DEFINE_ERROR(Name, code_value)                                 \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& what)                                 \
            : Error(ErrorCode::code_value, what) {}                            \
    }

HAMDIST_DEFINE_ERROR(DimensionError, dimension_error);
HAMDIST_DEFINE_ERROR(NotHermitian, not_hermitian);
HAMDIST_DEFINE_ERROR(NotTraceless, not_traceless);
HAMDIST_DEFINE_ERROR(NotDistinct, not_distinct);
HAMDIST_DEFINE_ERROR(FunctionalCollision, functional_collision);
HAMDIST_DEFINE_ERROR(InfeasibleTargets, infeasible_targets);
HAMDIST_DEFINE_ERROR(SingularInterpolation, singular_interpolation);
HAMDIST_DEFINE_ERROR(ZeroC, zero_c);
HAMDIST_DEFINE_ERROR(PlanVerificationFailed, plan_verification_failed);
HAMDIST_DEFINE_ERROR(DecompositionResidual, decomposition_residual);
HAMDIST_DEFINE_ERROR(NonzeroConstantTerm, nonzero_constant_term);
HAMDIST_DEFINE_ERROR(NonpositiveTime, nonpositive_time);
HAMDIST_DEFINE_ERROR(BudgetTooSmall, budget_too_small);
HAMDIST_DEFINE_ERROR(ParseError, parse_error);
HAMDIST_DEFINE_ERROR(NotUnitary, not_unitary);

#undef HAMDIST_DEFINE_ERROR

} // namespace hamdist
