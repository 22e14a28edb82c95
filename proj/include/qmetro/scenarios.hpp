// Copyright 2026 The qmetro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QMETRO_SCENARIOS_HPP_
#define QMETRO_SCENARIOS_HPP_

#include <string>
#include <vector>

#include "qmetro/channels.hpp"
#include "qmetro/metrology.hpp"

// Named parameter presets, the tau sweep engine producing benchmark-compared
// QFI tables, and the ordering report that condenses a sweep into the
// qualitative flags of interest (who beats the coherent benchmark, where).

namespace qmetro {

// Relative gap below which a source curve counts as coinciding with the
// benchmark, and the numerical slack allowed on benchmark-ceiling claims.
inline constexpr double kCoincidenceRelTol = 0.02;

struct ScenarioPreset {
    std::string name;
    double n_signal;  // signal photons on mode A, fixed across curves
    double n_low;     // faint-mode photons n_L of the thermal pair
    double t0;
    double omega1;
    double omega2;
    double g;
    double gprime;
    std::vector<double> eta_list;  // descending source asymmetries
    bool includes_single_thermal = true;  // eta = 1 baseline curve
    bool includes_coherent = true;        // analytic benchmark curve

    EnvironmentSpec environment() const {
        return EnvironmentSpec::make(t0, omega1, omega2, g, gprime);
    }
};

// The five named presets: pure_loss, thermal_loss, correlated_symmetric,
// correlated_asymmetric_negative, correlated_asymmetric_positive.
ScenarioPreset preset(const std::string& name);
const std::vector<std::string>& preset_names();

// One (curve, tau) evaluation plus full parameter provenance. eta carries -1
// on coherent-benchmark rows and 1 on single-thermal rows.
struct SweepRow {
    std::string scenario;
    std::string curve;  // "coherent", "eta_<value>", "single_thermal"
    double eta;
    double tau;
    double qfi;
    double qfi_benchmark;
    bool beats_benchmark;  // qfi > qfi_benchmark, strictly
    double n_signal;
    double n_low;
    double t0;
    double omega1;
    double omega2;
    double g;
    double gprime;
};

// Evenly spaced grid in (0,1); steps = 1 degenerates to {lo}.
std::vector<double> tau_grid(double lo, double hi, int steps);
std::vector<double> default_tau_grid();  // 99 points {0.01, ..., 0.99}

// Evaluates every curve of the preset on the grid. Rows are sorted by
// (curve, tau) and are bitwise identical for a fixed preset and grid
// regardless of `threads` (work is assigned and assembled by index).
std::vector<SweepRow> sweep(const ScenarioPreset& preset,
                            const std::vector<double>& taus, int threads = 1);

struct CurveSummary {
    std::string curve;
    double eta;
    double min_rel_excess;  // min over tau of (qfi - benchmark)/benchmark
    double max_rel_excess;  // max over tau of the same
    bool beats_everywhere;  // qfi > benchmark at every tau
    bool never_exceeds;     // qfi <= benchmark at every tau
    bool coincides;         // |rel excess| < kCoincidenceRelTol at every tau
};

struct OrderingReport {
    std::string scenario;
    int n_tau = 0;
    double tau_lo = 0.0;
    double tau_hi = 0.0;
    std::vector<CurveSummary> curves;  // source curves, label order
    // Quantified over the eta_list curves (single_thermal excluded):
    bool all_sources_beat_benchmark = false;
    // Quantified over all source curves including single_thermal:
    bool no_source_beats_benchmark = false;
    // Strictly larger H for smaller eta (eta = 1 included) at every tau:
    bool strict_eta_ordering = false;
    // Eta-list curve with the largest H at every tau, "" if mixed:
    std::string top_curve;
};

// Condenses the rows of one sweep into the report above.
OrderingReport ordering_report(const std::vector<SweepRow>& rows);

// Human-readable rendering, one flag per line.
std::string format_report(const OrderingReport& report);

// Planck occupation (exp(h f / k T) - 1)^{-1}. Documentation helper only:
// presets store the two-decimal occupation values quoted with the figures,
// not this function's output.
double planck_mean_occupation(double frequency_hz, double temperature_k);

}  // namespace qmetro

#endif  // QMETRO_SCENARIOS_HPP_
