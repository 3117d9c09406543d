#include "tdf/errors.hpp"

namespace tdf {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::malformed_row: return "MalformedRow";
        case Errc::gap_in_dates: return "GapInDates";
        case Errc::non_positive_level: return "NonPositiveLevel";
        case Errc::length_mismatch: return "LengthMismatch";
        case Errc::degenerate_series: return "DegenerateSeries";
        case Errc::insufficient_data: return "InsufficientData";
        case Errc::window_out_of_range: return "WindowOutOfRange";
        case Errc::io_error: return "IoError";
        case Errc::bad_config: return "BadConfig";
        case Errc::parameter_out_of_domain: return "ParameterOutOfDomain";
        case Errc::optimization_failed: return "OptimizationFailed";
        case Errc::infeasible_target: return "InfeasibleTarget";
        case Errc::infeasible_goal: return "InfeasibleGoal";
        case Errc::no_convergence: return "NoConvergence";
        case Errc::grid_too_small: return "GridTooSmall";
        case Errc::block_too_long: return "BlockTooLong";
        case Errc::unknown_time: return "UnknownTime";
        case Errc::empty_sample: return "EmptySample";
    }
    return "UnknownError";
}

bool is_input_error(Errc c) {
    switch (c) {
        case Errc::malformed_row:
        case Errc::gap_in_dates:
        case Errc::non_positive_level:
        case Errc::length_mismatch:
        case Errc::insufficient_data:
        case Errc::window_out_of_range:
        case Errc::io_error:
        case Errc::bad_config:
            return true;
        default:
            return false;
    }
}

} // namespace tdf
