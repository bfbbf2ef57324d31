// Acceptance checks. Each criterion prints one PASS or FAIL line; the exit status
// is the number of failures.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sideband/config.hpp"
#include "sideband/experiments.hpp"
#include "sideband/runner.hpp"

using namespace sideband;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

constexpr Complex kI{0.0, 1.0};

// Pinned tolerances.
constexpr double kClosedFormTol = 1e-10;
constexpr double kFringeTol = 1e-10;
constexpr double kFractionTol = 1e-3;
constexpr double kVisibilityTol = 1e-12;
constexpr double kQnlTol = 1e-12;
constexpr double kNormTol = 1e-12;
constexpr double kPhotonTol = 1e-10;
constexpr double kRoundTripTol = 1e-12;
constexpr double kDistanceMin = 0.1;
constexpr double kLsbExpected = 0.471;
constexpr double kLsbTol = 1e-3;
constexpr double kOracleTol = 1e-10;
constexpr double kFlatTol = 1e-10;
constexpr double kClosedFormSeconds = 1.0;
constexpr double kSuiteSeconds = 10.0;

int failures = 0;

void report(int id, bool ok, const std::string& what) {
  std::printf("%s  %2d  %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<double> theta_grid() { return {0.0, kPi / 8, kPi / 4, 3 * kPi / 8, kPi / 2}; }

std::vector<double> phi_grid() {
  std::vector<double> v;
  for (int i = 0; i <= 8; ++i) v.push_back(i * kPi / 4);
  return v;
}

void closed_form_pinning() {
  const auto t0 = Clock::now();
  const auto basket = basket_standard();
  const std::array<ModeId, 6> inputs{{{PortId::In, +1},
                                      {PortId::In, -1},
                                      {PortId::Vac, +1},
                                      {PortId::Vac, -1},
                                      {PortId::Vac, +3},
                                      {PortId::Vac, -3}}};
  double worst = 0.0;
  for (double theta : theta_grid()) {
    for (double phi : phi_grid()) {
      const auto U = analyser_unitary(theta, phi, basket);
      for (const auto& row : analyser_closed_form(theta, phi)) {
        for (const auto& input : inputs) {
          Complex expected{};
          for (const auto& term : row.terms) {
            if (term.input == input) expected = term.coefficient;
          }
          worst = std::max(worst, std::abs(U.entry(row.output, input) - expected));
        }
      }
    }
  }
  const double dt = seconds_since(t0);
  report(1, worst <= kClosedFormTol && dt < kClosedFormSeconds,
         fmt("analyser sub-block vs closed form: max error %.3g (tol %.0e), %.3f s (limit %.0f s)", worst,
             kClosedFormTol, dt, kClosedFormSeconds));
}

void fringe_formula() {
  const auto ideal = ImperfectionModel::ideal();
  const InputSpec pm{InputKind::PM, 1.0};
  double worst = 0.0;
  for (double theta : theta_grid()) {
    for (double phi : phi_grid()) {
      const double r = response_ratio(pm, theta, phi, ideal);
      worst = std::max(worst, std::abs(r - oracle::pm_response(theta, phi)));
    }
  }
  const double top = response_ratio(pm, kPi / 4, 0.0, ideal);
  const double bottom = response_ratio(pm, kPi / 4, kPi, ideal);
  const bool ok = worst <= kFringeTol && std::abs(top - 1.0) <= kFringeTol && std::abs(bottom) <= kFringeTol;
  report(2, ok,
         fmt("PM ratio vs (1 + sin 2theta cos phi)/2: max error %.3g (tol %.0e); (pi/4,0) -> %.6f, (pi/4,pi) -> %.6f",
             worst, kFringeTol, top, bottom));
}

void state_preparation() {
  const auto pm = pm_state(1.0);
  const auto lsb = ssb_prep(pm, kPrepOmegaTau, -1);
  const auto usb = ssb_prep(pm, kPrepOmegaTau, +1);
  const double lt = total_sideband_power(lsb, PortId::In);
  const double ut = total_sideband_power(usb, PortId::In);
  const double l_lower = sideband_power(lsb, {PortId::In, -1}) / lt;
  const double l_upper = sideband_power(lsb, {PortId::In, +1}) / lt;
  const double u_upper = sideband_power(usb, {PortId::In, +1}) / ut;
  const double u_lower = sideband_power(usb, {PortId::In, -1}) / ut;
  const bool ok = std::abs(l_lower - 0.985) <= kFractionTol && std::abs(l_upper - 0.015) <= kFractionTol &&
                  std::abs(u_upper - 0.985) <= kFractionTol && std::abs(u_lower - 0.015) <= kFractionTol;
  report(3, ok,
         fmt("Omega tau = 1.33 preparation: LSB %.4f/%.4f, USB %.4f/%.4f (target 0.985/0.015 +- %.0e)", l_lower,
             l_upper, u_upper, u_lower, kFractionTol));
}

void fringe_visibilities() {
  const InputSpec pm{InputKind::PM, 1.0};
  const auto grid = linspace(0.0, 2 * kPi, 33);
  auto spectral = ImperfectionModel::ideal();
  spectral.fringe_scale = 0.97;
  auto homodyne = ImperfectionModel::nominal();
  homodyne.fringe_scale = 0.96;
  const double v_spec = fringe_visibility(sweep_phi(pm, grid, spectral));
  const double v_hom = fringe_visibility(sweep_phi(pm, grid, homodyne, DetectionChain::Homodyne));
  const double v_ideal = fringe_visibility(sweep_phi(pm, grid, ImperfectionModel::ideal()));
  const bool ok = std::abs(v_spec - 0.97) <= kVisibilityTol && std::abs(v_hom - 0.96) <= kVisibilityTol &&
                  std::abs(v_ideal - 1.0) <= kVisibilityTol;
  report(4, ok,
         fmt("phi-sweep visibility: spectral %.14f, homodyne chain %.14f, ideal %.14f (tol %.0e)", v_spec, v_hom,
             v_ideal, kVisibilityTol));
}

void qnl_preservation() {
  const auto basket = basket_standard();
  const CoherentSidebandState vacuum(basket);
  double worst = 0.0;
  for (double theta : theta_grid()) {
    for (double phi : phi_grid()) {
      const auto out = apply_unitary(analyser_unitary(theta, phi, basket), vacuum);
      for (const auto& n : out.noise()) worst = std::max({worst, std::abs(n.plus - 1.0), std::abs(n.minus - 1.0)});
      for (PortId port : kAllPorts) {
        const auto v = measured_variances(out, port);
        worst = std::max({worst, std::abs(v.plus - 1.0), std::abs(v.minus - 1.0)});
      }
    }
  }
  double worst_hom = 0.0;
  for (double eta : {0.05, 0.3, 0.5, 0.95, 1.0}) {
    for (double lo : linspace(0.0, 2 * kPi, 17)) {
      worst_hom = std::max(worst_hom, std::abs(homodyne_variance(vacuum, PortId::Out1, {eta, lo}) - 1.0));
    }
  }
  report(5, worst <= kQnlTol && worst_hom <= kQnlTol,
         fmt("vacuum through analyser: max |V-1| %.3g; homodyne at any efficiency: max |V-1| %.3g (tol %.0e)", worst,
             worst_hom, kQnlTol));
}

void single_photon_contract() {
  const auto psi = single_photon(std::polar(0.6, 0.3), std::polar(0.8, 2.0));
  double worst_norm = 0.0;
  for (int i = 0; i < 9; ++i) {
    for (int j = 0; j < 9; ++j) {
      const double n = single_photon_transform(psi, i * kPi / 16, j * kPi / 4).norm();
      worst_norm = std::max(worst_norm, std::abs(n - 1.0));
    }
  }
  const double r = 1.0 / std::sqrt(2.0);
  const auto pass = single_photon_transform(single_photon(1.0, 0.0), 0.0, 0.0);
  const auto swap = single_photon_transform(single_photon(0.0, 1.0), kPi / 2, 0.0);
  const auto balanced = single_photon_transform(single_photon(r, r), kPi / 4, 0.0);
  const double worst_example =
      std::max({std::abs(pass.amplitude({PortId::Out2, -1}) - kI), std::abs(pass.amplitude({PortId::Out1, +1})),
                std::abs(swap.amplitude({PortId::Out2, -1}) - kI), std::abs(swap.amplitude({PortId::Out1, +1})),
                std::abs(balanced.amplitude({PortId::Out2, -1}) - kI),
                std::abs(balanced.amplitude({PortId::Out1, +1}))});
  report(6, worst_norm <= kNormTol && worst_example <= kNormTol,
         fmt("single photon: norm defect %.3g over 9x9 grid; pass-through/swap/balanced max error %.3g (tol %.0e)",
             worst_norm, worst_example, kNormTol));
}

void photon_number_consistency() {
  std::mt19937 rng(2024);
  std::normal_distribution<double> gauss(0.0, 1.5);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = CoherentSidebandState(basket_standard())
                       .with_amplitude({PortId::In, +1}, {gauss(rng), gauss(rng)})
                       .with_amplitude({PortId::In, -1}, {gauss(rng), gauss(rng)});
    const double n = photon_number(measured_variances(s, PortId::In));
    const double flux = total_sideband_power(s, PortId::In) / 2.0;
    worst = std::max(worst, std::abs(n - flux) / std::max(1.0, flux));
  }
  report(7, worst <= kPhotonTol,
         fmt("n = (S+ + S- - 2)/4 vs sideband flux, 100 random states: max error %.3g (tol %.0e)", worst, kPhotonTol));
}

void attenuation_inference() {
  bool exact = true;
  for (double v : {1.0, 1.25, 1.5, 2.0, 3.7, 40.0}) exact = exact && infer_input_variance(v, 4.0) == 4.0 * v - 3.0;
  double worst = 0.0;
  for (double g : {1.0, 2.0, 4.0, 17.5}) {
    for (double v : {1.0, 1.001, 2.0, 5.0, 123.0}) {
      worst = std::max(worst, std::abs(infer_input_variance(attenuate_variance(v, g), g) - v) / std::max(1.0, v));
    }
  }
  report(8, exact && worst <= kRoundTripTol,
         fmt("infer(V,4) == 4V - 3 exactly: %s; attenuate-then-infer round trip %.3g (tol %.0e)", exact ? "yes" : "no",
             worst, kRoundTripTol));
}

void distinguishability() {
  const auto ideal = ImperfectionModel::ideal();
  const auto grid = linspace(0.0, drive_for_theta(kPi / 2, ideal), 41);
  const auto rep = distinguish_inputs(grid, ideal, kDistanceMin);
  const double least = std::min({rep.pm_lsb, rep.pm_usb, rep.lsb_usb});

  const double pm = response_ratio({InputKind::PM, 1.0}, kPi / 4, 0.0, ideal);
  const double lsb = response_ratio({InputKind::LSB, 1.0}, kPi / 4, 0.0, ideal);
  const double lsb_oracle = oracle::analysed_ratio(oracle::prepared_pm(1.0, kPrepOmegaTau, -1), kPi / 4, 0.0);

  const bool ok = least >= kDistanceMin && std::abs(pm - 1.0) <= kOracleTol &&
                  std::abs(lsb - lsb_oracle) <= kOracleTol && std::abs(lsb - kLsbExpected) <= kLsbTol;
  report(9, ok,
         fmt("pairwise L-inf PM/LSB %.4f, PM/USB %.4f, LSB/USB %.4f (min %.1f); PM(pi/4,0) = %.6f; "
             "LSB(pi/4,0) = %.6f, oracle %.6f, expected %.3f +- %.0e",
             rep.pm_lsb, rep.pm_usb, rep.lsb_usb, kDistanceMin, pm, lsb, lsb_oracle, kLsbExpected, kLsbTol));
}

void ssb_phase_insensitivity() {
  const auto grid = linspace(0.0, 2 * kPi, 91);
  double worst = 0.0;
  // Lone sidebands, then fully separated ones from the preparation interferometer.
  for (int k : {-1, +1}) {
    const auto s = CoherentSidebandState(basket_standard()).with_amplitude({PortId::Out1, k}, Complex{0.7, -1.2});
    const auto t = homodyne_scan(s, PortId::Out1, {0.9, 0.0}, grid);
    worst = std::max(worst, t.max_y() - t.min_y());
  }
  for (int lock : {-1, +1}) {
    const auto s = ssb_prep(pm_state(0.8), kPi / 2, lock);
    const auto t = homodyne_scan(s, PortId::In, {0.95, 0.0}, grid);
    worst = std::max(worst, t.max_y() - t.min_y());
  }
  report(10, worst <= kFlatTol, fmt("single-sideband homodyne scan: peak-to-peak %.3g dB (tol %.0e)", worst, kFlatTol));
}

void osa_census() {
  const OsaParams osa{500e6, 2e6, 0.05};
  const ScanRange scan{-200e6, 310e6, 5101};
  const double sb = kNominalSidebandHz;
  const auto in = with_carrier(pm_state(std::sqrt(0.015)), PortId::In, 1.0);
  const auto out = apply_unitary(analyser_unitary(kPi / 4, 0.0, in.basket()), in);
  const auto t = osa_scan(out, 0.0, PortId::Out1, osa, scan, sb);
  const auto peaks = find_peaks(t, 0.01 * t.max_y());
  // mismatch image of the shifted carrier, carrier, +Omega sideband, shifted carrier, mismatch image of the carrier
  const std::array<double, 5> expected{2 * sb - osa.fsr / 2, 0.0, sb, 2 * sb, osa.fsr / 2};
  const double step = (scan.stop - scan.start) / static_cast<double>(scan.count - 1);
  bool ok = peaks.size() == expected.size();
  std::string where;
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    where += fmt("%s%.1f", i ? ", " : "", peaks[i].x / 1e6);
    if (ok) ok = std::abs(peaks[i].x - expected[i]) <= step && (i == 0 || peaks[i].x > peaks[i - 1].x);
  }
  report(11, ok, fmt("OSA peaks at {%s} MHz, expected {-69, 0, 90.5, 181, 250} MHz within one %.0f kHz step",
                     where.c_str(), step / 1e3));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void determinism(Clock::time_point suite_start) {
  const auto dir = fs::temp_directory_path() / "sideband_acceptance";
  fs::create_directories(dir);
  bool same = true;
  int runs = 0;
  for (const char* experiment :
       {"sweep-phi", "sweep-drive", "osa-scan", "homodyne-scan", "single-photon", "distinguish"}) {
    std::array<std::string, 2> outputs;
    for (int pass = 0; pass < 2; ++pass) {
      const auto stem = dir / fmt("%s_%d", experiment, pass);
      auto config = parse_config(fmt("experiment=%s\ninput_kind=lsb\n", experiment), {{"out", stem.string() + ".csv"}});
      std::ostringstream summary, errors;
      const int status = run(config, summary, errors);
      same = same && status == 0;
      const auto prefix = stem.filename().string();
      std::vector<fs::path> written;
      for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().filename().string().starts_with(prefix)) written.push_back(entry.path());
      }
      std::sort(written.begin(), written.end());
      std::string files;
      for (const auto& p : written) files += p.filename().string().substr(prefix.size()) + slurp(p);
      outputs[pass] = files + summary.str();
      // The summary names the output path, which differs between the two passes.
      const auto tag = stem.string();
      for (std::size_t at; (at = outputs[pass].find(tag)) != std::string::npos;) outputs[pass].replace(at, tag.size(), "#");
      ++runs;
    }
    if (outputs[0].empty() || outputs[0] != outputs[1]) {
      std::printf("      %s differs between runs\n", experiment);
      same = false;
    }
  }
  fs::remove_all(dir);
  const double dt = seconds_since(suite_start);
  report(12, same && dt < kSuiteSeconds,
         fmt("%d in-process runs pairwise byte-identical: %s; acceptance runtime %.2f s (limit %.0f s)", runs,
             same ? "yes" : "no", dt, kSuiteSeconds));
}

}  // namespace

int main() {
  const auto start = Clock::now();
  closed_form_pinning();
  fringe_formula();
  state_preparation();
  fringe_visibilities();
  qnl_preservation();
  single_photon_contract();
  photon_number_consistency();
  attenuation_inference();
  distinguishability();
  ssb_phase_insensitivity();
  osa_census();
  determinism(start);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures;
}
