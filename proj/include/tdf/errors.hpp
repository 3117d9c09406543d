#pragma once

#include <stdexcept>
#include <string>

namespace tdf {

// Every failure mode the library reports, split between input problems
// (bad files, bad config) and computational problems.
enum class Errc {
    // input / data
    malformed_row,
    gap_in_dates,
    non_positive_level,
    length_mismatch,
    degenerate_series,
    insufficient_data,
    window_out_of_range,
    io_error,
    bad_config,
    // numerics
    parameter_out_of_domain,
    optimization_failed,
    infeasible_target,
    infeasible_goal,
    no_convergence,
    grid_too_small,
    block_too_long,
    unknown_time,
    empty_sample,
};

const char* errc_name(Errc c);

// True for errors caused by inputs/files rather than computation.
// The CLI maps these to exit code 2, everything else to 1.
bool is_input_error(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& msg) {
    throw Error(code, msg);
}

inline void require(bool cond, Errc code, const std::string& msg) {
    if (!cond) raise(code, msg);
}

} // namespace tdf
