#pragma once

// Plain-text outputs. CSV files start with a "#schema=<name>/<version>" line,
// numbers are written with 9 significant digits, and nothing depends on the
// clock or the environment, so identical inputs give byte-identical files.

#include "sqz/estimation.hpp"
#include "sqz/polariton.hpp"
#include "sqz/protocols.hpp"
#include "sqz/reservoir.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sqz::io {

std::string format_number(double v);

void write_wigner_csv(std::ostream& os, const WignerGrid& w);
void write_ramsey_csv(std::ostream& os, std::span<const RamseyTrace> traces);
void write_trajectory_csv(std::ostream& os, const BlochTrajectory& traj);
void write_detuning_csv(std::ostream& os, std::span<const DetuningPoint> x_axis,
                        std::span<const DetuningPoint> y_axis);
void write_gain_csv(std::ostream& os, std::span<const GainRow> rows);
void write_trace_csv(std::ostream& os, const Trace& trace);

/// Reads a two-column (time, value) CSV. Lines starting with '#' and a
/// non-numeric header line are skipped.
Trace read_trace_csv(std::istream& is, const std::string& source);

std::string polariton_json(const PolaritonSystem& ps);
std::string moments_json(const MomentEstimate& me, const DecayEstimate* decays = nullptr);
std::string ramsey_json(std::span<const RamseyTrace> traces);
std::string detuning_json(std::span<const DetuningPoint> x_axis, std::span<const DetuningPoint> y_axis);
std::string gain_json(std::span<const GainRow> rows, double eta);

}  // namespace sqz::io
