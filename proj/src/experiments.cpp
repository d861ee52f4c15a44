#include "fockbath/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "fockbath/chaos.hpp"
#include "fockbath/dynamics.hpp"
#include "fockbath/observables.hpp"
#include "fockbath/orbitals.hpp"
#include "fockbath/presets.hpp"
#include "fockbath/stochastic.hpp"

namespace fockbath {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double num(const json& p, const char* key) { return p.at(key).get<double>(); }
int inum(const json& p, const char* key) {
  return static_cast<int>(std::llround(p.at(key).get<double>()));
}

std::uint64_t seed_of(const json& p) { return p.at("seed").get<std::uint64_t>(); }

// Tracks written files so a failed run leaves no partial bundle behind.
struct Bundle {
  fs::path dir;
  std::string experiment;
  std::string hash;
  std::uint64_t seed = 0;
  std::vector<fs::path> written;

  std::ofstream open_csv(const std::string& name, const std::string& columns) {
    const fs::path path = dir / name;
    std::ofstream out(path);
    if (!out) throw NumericalError("cannot open output file " + path.string());
    written.push_back(path);
    out << "# fockbath " << experiment << "\n";
    out << "# config_hash: " << hash << "\n";
    out << "# seed: " << seed << "\n";
    out << "# units: hbar = 1, energies in hbar*omega0, times in 1/omega0\n";
    out << columns << "\n";
    return out;
  }

  void write_json(const std::string& name, const json& j) {
    const fs::path path = dir / name;
    std::ofstream out(path);
    if (!out) throw NumericalError("cannot open output file " + path.string());
    written.push_back(path);
    out << j.dump(2) << "\n";
  }

  void discard() {
    for (const auto& p : written) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }
};

void merge_checked(json& dst, const json& src, const std::string& context) {
  if (!src.is_object()) throw ConfigError(context + ": expected a JSON object");
  for (const auto& [key, value] : src.items()) {
    if (!dst.contains(key)) throw ConfigError(context + ": unknown key '" + key + "'");
    const json& slot = dst.at(key);
    const bool ok = slot.is_null() || value.is_null() ||
                    (slot.is_number() && value.is_number()) ||
                    slot.type() == value.type();
    if (!ok) {
      throw ConfigError(context + ": key '" + key + "' expects " + slot.type_name() +
                        ", got " + value.type_name());
    }
    dst[key] = value;
  }
}

json dynamics_defaults(int bands) {
  json p{{"seed", 1},
         {"N", 30},
         {"bands", bands},
         {"J0", 0.153},
         {"J1", 0.226},
         {"E0", 1.37},
         {"E1", 3.31},
         {"U0_scale", bands == 1 ? 0.1 : 2.0},
         {"U1_ratio", 0.75},
         {"U01_ratio", 0.5},
         {"gI_scale", 2.0},
         {"Js", 0.1},
         {"t_switch", 100.0},
         {"t_end", 600.0},
         {"dt_sample", 0.1},
         {"tolerance", 1e-10},
         {"initial_bath", nullptr},
         {"initial_probe", 0},
         {"record_marginals", true},
         {"dimension_cap", 1000000},
         {"fit_t0", 110.0},
         {"fit_t1", 500.0},
         {"final_window", 100.0},
         {"hist_t0", 300.0},
         {"hist_t1", 600.0}};
  return p;
}

std::array<int, 4> scaled_initial(int atoms, int bands) {
  if (bands == 1) return {atoms, 0, 0, 0};
  // N = 30 reference split |16,0,10,4> scaled to other atom numbers.
  int l0 = static_cast<int>(std::lround(16.0 * atoms / 30.0));
  int r1 = static_cast<int>(std::lround(4.0 * atoms / 30.0));
  int r0 = atoms - l0 - r1;
  if (r0 < 0) {
    l0 += r0;
    r0 = 0;
  }
  return {l0, 0, r0, r1};
}

ModelSpec model_from(const json& p) {
  const int atoms = inum(p, "N");
  if (atoms < 1) throw ConfigError("N must be >= 1");
  ModelSpec spec = paper_model(atoms);
  spec.bands = inum(p, "bands");
  if (spec.bands != 1 && spec.bands != 2) throw ConfigError("bands must be 1 or 2");
  spec.params.J0 = num(p, "J0");
  spec.params.J1 = num(p, "J1");
  spec.params.E0 = num(p, "E0");
  spec.params.E1 = num(p, "E1");
  spec.params.U0 = num(p, "U0_scale") / atoms;
  spec.params.U1 = num(p, "U1_ratio") * spec.params.U0;
  spec.params.U01 = num(p, "U01_ratio") * spec.params.U0;
  spec.params.gI = num(p, "gI_scale") / atoms;
  spec.params.Js = num(p, "Js");
  spec.t_switch = num(p, "t_switch");
  spec.dimension_cap = static_cast<std::int64_t>(num(p, "dimension_cap"));
  return spec;
}

Protocol protocol_from(const json& p, const ModelSpec& spec) {
  Protocol proto;
  proto.t_switch = num(p, "t_switch");
  proto.t_end = num(p, "t_end");
  proto.dt_sample = num(p, "dt_sample");
  proto.tolerance = num(p, "tolerance");
  proto.initial_probe = inum(p, "initial_probe");
  proto.record_marginals = p.at("record_marginals").get<bool>();
  if (p.at("initial_bath").is_null()) {
    proto.initial_bath = scaled_initial(spec.atoms, spec.bands);
  } else {
    const auto v = p.at("initial_bath").get<std::vector<int>>();
    if (static_cast<int>(v.size()) != spec.modes()) {
      throw ConfigError("initial_bath must list one occupation per mode");
    }
    proto.initial_bath = {0, 0, 0, 0};
    for (std::size_t i = 0; i < v.size(); ++i) proto.initial_bath[i] = v[i];
  }
  int total = 0;
  for (int n : proto.initial_bath) {
    if (n < 0) throw ConfigError("initial_bath occupations must be >= 0");
    total += n;
  }
  if (total != spec.atoms) throw ConfigError("initial_bath must sum to N");
  if (proto.initial_probe != 0 && proto.initial_probe != 1) {
    throw ConfigError("initial_probe must be 0 (L) or 1 (R)");
  }
  return proto;
}

const char* mode_name(int bands, int mode) {
  static const char* four[4] = {"L0", "L1", "R0", "R1"};
  static const char* two[2] = {"L0", "R0"};
  return bands == 1 ? two[mode] : four[mode];
}

json fit_to_json(const ExponentialFit& fit, double baseline) {
  return json{{"rate", fit.rate},
              {"amplitude", fit.amplitude},
              {"r_squared", fit.r_squared},
              {"points", fit.points},
              {"baseline", baseline}};
}

json gaussian_to_json(const GaussianFit& fit) {
  return json{{"mean", fit.mean},
              {"variance", fit.variance},
              {"chi_square", fit.chi_square},
              {"p_value", fit.p_value},
              {"bins", fit.bins},
              {"effective_samples", fit.effective_samples}};
}

enum class DynKind { Evolve, Fig2, Fig3, Fig5 };

json run_dynamics(const ExperimentConfig& cfg, Bundle& bundle, DynKind kind) {
  const json& p = cfg.params;
  const ModelSpec spec = model_from(p);
  const Protocol proto = protocol_from(p, spec);

  ProtocolResult result;
  try {
    result = run_protocol(spec, proto);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const std::length_error& e) {
    throw ConfigError(e.what());
  }
  const TimeSeries& ts = result.series;

  {
    auto out = bundle.open_csv("series.csv", "t,nL0,nL1,nR0,nR1,pL,pR,purity,energy");
    for (std::size_t s = 0; s < ts.size(); ++s) {
      double n[4] = {0, 0, 0, 0};
      if (spec.bands == 1) {
        n[0] = ts.occ[s][0];
        n[2] = ts.occ[s][1];
      } else {
        for (int m = 0; m < 4; ++m) n[m] = ts.occ[s][static_cast<std::size_t>(m)];
      }
      out << fmt(ts.t[s]) << ',' << fmt(n[0]) << ',' << fmt(n[1]) << ',' << fmt(n[2]) << ','
          << fmt(n[3]) << ',' << fmt(ts.p_left[s]) << ',' << fmt(ts.p_right[s]) << ','
          << fmt(ts.purity[s]) << ',' << fmt(ts.energy[s]) << "\n";
    }
  }

  json summary;
  summary["N"] = spec.atoms;
  summary["bands"] = spec.bands;
  summary["dimension"] = 2 * spec.make_basis().bath_dimension();
  summary["final_purity"] = ts.purity.back();
  summary["final_norm_error"] = std::abs(result.final_state.norm() - 1.0);

  // Energy conservation within each stage of the protocol.
  double drift = 0.0, mean_e = 0.0;
  std::size_t count = 0;
  for (std::size_t s = 0; s < ts.size(); ++s) {
    if (ts.t[s] < proto.t_switch + 1e-9) continue;
    mean_e += ts.energy[s];
    ++count;
  }
  if (count > 0) {
    mean_e /= static_cast<double>(count);
    for (std::size_t s = 0; s < ts.size(); ++s) {
      if (ts.t[s] < proto.t_switch + 1e-9) continue;
      drift = std::max(drift, std::abs(ts.energy[s] - mean_e));
    }
  }
  summary["coupled_energy"] = mean_e;
  summary["energy_drift"] = drift;

  // Mean purity over the trailing window; its 2P-1 level is the finite-size
  // floor subtracted before the decay fit.
  const double w0 = proto.t_end - num(p, "final_window");
  double floor_p = 0.0;
  count = 0;
  for (std::size_t s = 0; s < ts.size(); ++s) {
    if (ts.t[s] < w0) continue;
    floor_p += ts.purity[s];
    ++count;
  }
  floor_p /= static_cast<double>(count);
  summary["final_window_purity"] = floor_p;

  try {
    FitOptions options;
    options.baseline = 2.0 * floor_p - 1.0;
    options.envelope = true;
    std::vector<double> excess(ts.purity.size());
    for (std::size_t s = 0; s < excess.size(); ++s) excess[s] = 2.0 * ts.purity[s] - 1.0;
    const ExponentialFit fit =
        fit_exponential(ts.t, excess, num(p, "fit_t0"), num(p, "fit_t1"), options);
    summary["gamma"] = fit_to_json(fit, options.baseline);
  } catch (const std::exception& e) {
    summary["gamma"] = nullptr;
    summary["gamma_error"] = e.what();
  }

  if (kind == DynKind::Fig3) {
    std::size_t imin = 0;
    double vmin = 2.0;
    for (std::size_t s = 0; s < ts.size(); ++s) {
      if (ts.t[s] < proto.t_switch) continue;
      if (ts.purity[s] < vmin) {
        vmin = ts.purity[s];
        imin = s;
      }
    }
    double revival = 0.0;
    std::size_t ifirst = imin;
    // first local minimum after the switch, then the best later recovery
    for (std::size_t s = 1; s + 1 < ts.size(); ++s) {
      if (ts.t[s] < proto.t_switch + 1.0) continue;
      if (ts.purity[s] <= ts.purity[s - 1] && ts.purity[s] < ts.purity[s + 1] &&
          ts.purity[s] < 0.95) {
        ifirst = s;
        break;
      }
    }
    for (std::size_t s = ifirst + 1; s < ts.size(); ++s) revival = std::max(revival, ts.purity[s]);
    summary["first_min_purity"] = ts.purity[ifirst];
    summary["first_min_t"] = ts.t[ifirst];
    summary["revival_max"] = revival;
  }

  if ((kind == DynKind::Fig2 || kind == DynKind::Fig5) && ts.marginals.empty()) {
    summary["histograms"] = nullptr;  // marginals not recorded on this run
  } else if (kind == DynKind::Fig2 || kind == DynKind::Fig5) {
    json hists = json::object();
    for (int m = 0; m < spec.modes(); ++m) {
      const OccupationDistribution dist =
          accumulate_occupation_distribution(ts, m, num(p, "hist_t0"), num(p, "hist_t1"));
      const GaussianFit fit = occupation_histogram(dist);
      hists[mode_name(spec.bands, m)] = gaussian_to_json(fit);
      if (m == 0) summary["hist_width"] = std::sqrt(fit.variance);
      if (kind == DynKind::Fig5) {
        auto out = bundle.open_csv(std::string("histogram_") + mode_name(spec.bands, m) + ".csv",
                                   "n_per_atom,probability,gaussian");
        const double sigma = std::sqrt(fit.variance);
        for (std::size_t k = 0; k < dist.p.size(); ++k) {
          const double x = static_cast<double>(k) / spec.atoms;
          const double half = 0.5 / spec.atoms;
          const double gauss =
              sigma > 0 ? 0.5 * (std::erfc(-(x + half - fit.mean) / (sigma * std::sqrt(2.0))) -
                                 std::erfc(-(x - half - fit.mean) / (sigma * std::sqrt(2.0))))
                        : 0.0;
          out << fmt(x) << ',' << fmt(dist.p[k]) << ',' << fmt(gauss) << "\n";
        }
      }
    }
    summary["histograms"] = hists;

    // Band-total ("energy level") populations per site: the quantity whose
    // mean values 0.41 / 0.09 the Fig.-5 Gaussians are quoted for.
    if (spec.bands == 2 && !ts.level_marginals.empty()) {
      json levels = json::object();
      const char* level_name[2] = {"lower", "upper"};
      for (int lv = 0; lv < 2; ++lv) {
        const OccupationDistribution dist =
            accumulate_level_distribution(ts, lv, num(p, "hist_t0"), num(p, "hist_t1"));
        const GaussianFit fit = occupation_histogram(dist);
        levels[level_name[static_cast<std::size_t>(lv)]] = gaussian_to_json(fit);
        if (lv == 0) summary["level_width"] = std::sqrt(fit.variance);
        if (kind == DynKind::Fig5) {
          auto out = bundle.open_csv(std::string("histogram_level_") +
                                         level_name[static_cast<std::size_t>(lv)] + ".csv",
                                     "n_per_site,probability,gaussian");
          const double sigma = std::sqrt(fit.variance);
          for (std::size_t k = 0; k < dist.p.size(); ++k) {
            const double x = static_cast<double>(k) / dist.atoms;
            const double half = 0.5 / dist.atoms;
            const double gauss =
                sigma > 0 ? 0.5 * (std::erfc(-(x + half - fit.mean) / (sigma * std::sqrt(2.0))) -
                                   std::erfc(-(x - half - fit.mean) / (sigma * std::sqrt(2.0))))
                          : 0.0;
            out << fmt(x) << ',' << fmt(dist.p[k]) << ',' << fmt(gauss) << "\n";
          }
        }
      }
      summary["level_histograms"] = levels;
    }
  }

  // Participation ratio of the eigenstate nearest the run energy; only
  // attempted when the bath block is small enough to diagonalize.
  if (kind == DynKind::Fig2 && spec.bands == 2) {
    const BasisIndex basis = spec.make_basis();
    if (basis.bath_dimension() <= 2000) {
      const SparseOperator block = build_bath_block(spec, basis);
      const EigenDecomposition dec = eigensolve_bath(block);
      const std::int64_t a = closest_eigenstate(dec, mean_e);
      summary["participation_ratio"] = eigenstate_profile(dec, block, a).participation_ratio;
    } else {
      summary["participation_ratio"] = nullptr;
    }
  }
  return summary;
}

json run_orbitals(const ExperimentConfig& cfg, Bundle& bundle) {
  const json& p = cfg.params;
  Grid1D grid;
  grid.x_min = num(p, "x_min");
  grid.x_max = num(p, "x_max");
  grid.n_points = inum(p, "n_points");
  TrapPotential pot;
  pot.barrier_height = num(p, "V0");
  pot.barrier_width = num(p, "sigma_b");
  try {
    grid.validate();
    pot.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  const double mass_ratio = num(p, "mass_ratio");
  const double stiffness = num(p, "probe_stiffness");
  const auto bath_states = solve_eigenstates(pot, grid, 1.0, 4);
  const auto probe_states = solve_eigenstates(pot, grid, mass_ratio, 2, stiffness);
  const OrbitalSet orb = localize(bath_states, probe_states, grid, mass_ratio);
  const HubbardParams hp = hubbard_params(orb, pot, num(p, "g"), num(p, "gI"), stiffness);

  json c = json::array();
  for (int l = 0; l < 2; ++l) {
    json jm = json::array();
    for (int m = 0; m < 2; ++m) {
      json ja = json::array();
      for (int al = 0; al < 2; ++al) {
        json jb = json::array();
        for (int be = 0; be < 2; ++be) {
          json jg = json::array();
          for (int ga = 0; ga < 2; ++ga) {
            json jd = json::array();
            for (int de = 0; de < 2; ++de) jd.push_back(hp.C.at(l, m, al, be, ga, de));
            jg.push_back(jd);
          }
          jb.push_back(jg);
        }
        ja.push_back(jb);
      }
      jm.push_back(ja);
    }
    c.push_back(jm);
  }
  json summary{{"J0", hp.J0},     {"J1", hp.J1},   {"E0", hp.E0}, {"E1", hp.E1},
               {"U0", hp.U0},     {"U1", hp.U1},   {"U01", hp.U01},
               {"Js", hp.Js},     {"gI", hp.gI},   {"C", c}};
  bundle.write_json("params.json", summary);

  auto out = bundle.open_csv("orbitals.csv", "x,phiL0,phiR0,phiL1,phiR1,psiL,psiR");
  for (int i = 0; i < grid.n_points; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    out << fmt(grid.x(i)) << ',' << fmt(orb.bath[0][0][k]) << ',' << fmt(orb.bath[0][1][k]) << ','
        << fmt(orb.bath[1][0][k]) << ',' << fmt(orb.bath[1][1][k]) << ',' << fmt(orb.probe[0][k])
        << ',' << fmt(orb.probe[1][k]) << "\n";
  }
  return summary;
}

json run_chaos(const ExperimentConfig& cfg, Bundle& bundle) {
  const json& p = cfg.params;
  ModelSpec spec = model_from(p);
  if (spec.bands != 2) throw ConfigError("chaos diagnostics need the two-band model");
  if (!p.at("U01").is_null()) spec.params.U01 = num(p, "U01");
  const BasisIndex basis = spec.make_basis();
  if (basis.bath_dimension() > 8000) {
    throw ConfigError("chaos diagnostics need a dense-solvable bath (N too large)");
  }
  ModelSpec spec0 = spec;
  spec0.params.U01 = 0.0;

  const SparseOperator block = build_bath_block(spec, basis);
  const SparseOperator block0 = build_bath_block(spec0, basis);
  const EigenDecomposition dec = eigensolve_bath(block);
  const EigenDecomposition dec0 = eigensolve_bath(block0);

  const double wf = num(p, "window_fraction");
  if (wf <= 0 || wf >= 1) throw ConfigError("window_fraction must lie in (0,1)");
  const auto window_of = [&](const EigenDecomposition& d) {
    const std::int64_t i0 = static_cast<std::int64_t>(static_cast<double>(d.dim) * (0.5 - wf / 2));
    const std::int64_t i1 = static_cast<std::int64_t>(static_cast<double>(d.dim) * (0.5 + wf / 2));
    return std::pair<double, double>(d.values[static_cast<std::size_t>(i0)],
                                     d.values[static_cast<std::size_t>(i1 - 1)]);
  };
  const auto [e_min, e_max] = window_of(dec);
  const auto [e0_min, e0_max] = window_of(dec0);

  const int mode = inum(p, "mode");
  if (mode < 0 || mode >= spec.modes()) throw ConfigError("mode out of range");
  const OffdiagStats stats =
      offdiag_occupation_stats(dec, basis, mode, e_min, e_max, inum(p, "min_states"));
  const double delta = mean_level_spacing(dec0.values, e0_min, e0_max);
  const double delta2 = perturbation_width_squared(build_band_coupling_block(spec, basis));

  const std::int64_t a = closest_eigenstate(dec, 0.5 * (e_min + e_max));
  const std::int64_t a0 = closest_eigenstate(dec0, 0.5 * (e0_min + e0_max));
  const EigenProfile prof = eigenstate_profile(dec, block, a);
  const EigenProfile prof0 = eigenstate_profile(dec0, block0, a0);
  // How many unperturbed eigenstates the band coupling mixes into the
  // mid-spectrum state; an unperturbed eigenstate scores exactly 1 here.
  const double cross_pr = participation_in_basis(dec, a, dec0);

  const auto write_profile = [&](const std::string& name, const EigenProfile& pr) {
    auto out = bundle.open_csv(name, "eps_n,component");
    for (std::size_t n = 0; n < pr.eps.size(); ++n) {
      out << fmt(pr.eps[n]) << ',' << fmt(pr.component[n]) << "\n";
    }
  };
  write_profile("eigenprofile.csv", prof);
  write_profile("eigenprofile_unperturbed.csv", prof0);

  // Thermal spread of the eigenstate occupations across the window.
  std::vector<double> diag_occ;
  for (std::int64_t s = 0; s < dec.dim; ++s) {
    const double e = dec.values[static_cast<std::size_t>(s)];
    if (e < e_min || e > e_max) continue;
    double v = 0.0;
    for (std::int64_t n = 0; n < dec.dim; ++n) {
      const double c = dec.component(n, s);
      v += c * c * basis.occupation(n, mode);
    }
    diag_occ.push_back(v / spec.atoms);
  }
  const GaussianFit occ_fit = scalar_histogram(diag_occ);
  {
    auto out = bundle.open_csv("histogram.csv", "bin_center,density,gaussian");
    const double sigma = std::sqrt(occ_fit.variance);
    const int nbins = 12;
    const double lo = occ_fit.mean - 4.0 * sigma, width = 8.0 * sigma / nbins;
    std::vector<double> counts(nbins, 0.0);
    for (double v : diag_occ) {
      int b = static_cast<int>((v - lo) / width);
      if (b >= 0 && b < nbins) counts[static_cast<std::size_t>(b)] += 1.0;
    }
    for (int b = 0; b < nbins; ++b) {
      const double x = lo + (b + 0.5) * width;
      const double density = counts[static_cast<std::size_t>(b)] /
                             (static_cast<double>(diag_occ.size()) * width);
      const double gauss = std::exp(-0.5 * (x - occ_fit.mean) * (x - occ_fit.mean) /
                                    occ_fit.variance) /
                           (sigma * std::sqrt(2.0 * M_PI));
      out << fmt(x) << ',' << fmt(density) << ',' << fmt(gauss) << "\n";
    }
  }

  json summary{{"N", spec.atoms},
               {"bath_dimension", dec.dim},
               {"window", json{{"e_min", e_min}, {"e_max", e_max}, {"states", stats.states_in_window}}},
               {"delta", delta},
               {"delta_squared", delta2},
               {"width_ratio_paper", delta * delta / delta2},
               {"width_ratio_standard", delta2 / delta},
               {"offdiag",
                json{{"mean", stats.mean},
                     {"stddev", stats.stddev},
                     {"std_error", stats.std_error},
                     {"pairs", stats.pairs},
                     {"mean_diagonal", stats.mean_diagonal}}},
               {"participation_ratio", prof.participation_ratio},
               {"participation_ratio_unperturbed", prof0.participation_ratio},
               {"participation_contrast", cross_pr},
               {"energy_width", prof.energy_width},
               {"occupation_fit", gaussian_to_json(occ_fit)}};
  return summary;
}

json run_stochastic(const ExperimentConfig& cfg, Bundle& bundle) {
  const json& p = cfg.params;
  NoiseSpec noise;
  noise.sigma = num(p, "sigma");
  noise.tau_c = p.at("tau_c").is_null() ? 1.0 / noise.sigma : num(p, "tau_c");
  noise.seed = seed_of(p);
  noise.ensemble = inum(p, "ensemble");
  MeanFieldParams mf;
  mf.Js = num(p, "Js_eff");
  mf.eps0 = num(p, "eps0");
  try {
    noise.validate();
    mf.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }

  DephasingSeries series;
  try {
    series = simulate_dephasing(mf, noise, num(p, "t_end"), num(p, "dt"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  {
    auto out = bundle.open_csv("series.csv", "t,pL_mean,offdiag_abs,purity,theta_exact,theta_linear");
    for (std::size_t s = 0; s < series.t.size(); ++s) {
      out << fmt(series.t[s]) << ',' << fmt(series.p_left[s]) << ',' << fmt(series.offdiag_abs[s])
          << ',' << fmt(series.purity[s]) << ',' << fmt(series.theta_exact[s]) << ','
          << fmt(series.theta_linear[s]) << "\n";
    }
  }

  json summary{{"sigma", noise.sigma},
               {"tau_c", noise.tau_c},
               {"ensemble", noise.ensemble},
               {"theta_linear_slope", 2.0 * noise.sigma * noise.sigma * noise.tau_c},
               {"offdiag_rate_analytic", 0.5 * noise.sigma * noise.sigma * noise.tau_c}};
  try {
    FitOptions options;
    options.envelope = false;
    const ExponentialFit fit = fit_exponential(series.t, series.offdiag_abs, num(p, "fit_t0"),
                                               num(p, "fit_t1"), options);
    summary["damping"] = fit_to_json(fit, 0.0);
  } catch (const std::exception& e) {
    summary["damping"] = nullptr;
    summary["damping_error"] = e.what();
  }
  return summary;
}

json run_one(const ExperimentConfig& cfg, Bundle& bundle);

json run_sweep(const ExperimentConfig& cfg, Bundle& bundle) {
  const json& p = cfg.params;
  const std::string base = p.at("base").get<std::string>();
  if (base == "sweep") throw ConfigError("sweep cannot nest itself");
  const std::string axis = p.at("axis").get<std::string>();
  const auto values = p.at("values").get<std::vector<double>>();
  if (values.empty()) throw ConfigError("sweep needs at least one value");

  int workers = inum(p, "workers");
  if (workers <= 0) {
    const char* env = std::getenv("FOCKBATH_WORKERS");
    workers = env ? std::max(1, std::atoi(env)) : 1;
  }

  // Per-point configs are fully resolved up front so axis/override errors
  // surface as config errors before any point runs.
  std::vector<ExperimentConfig> points;
  for (std::size_t i = 0; i < values.size(); ++i) {
    json params = default_params(base);
    merge_checked(params, p.at("overrides"), "sweep overrides");
    if (!params.contains(axis) || !(params.at(axis).is_number() || params.at(axis).is_null())) {
      throw ConfigError("sweep axis '" + axis + "' is not a numeric key of " + base);
    }
    params[axis] = values[i];
    params["seed"] = seed_of(p);
    std::ostringstream name;
    name << "point_" << i << "_" << axis << "=" << fmt(values[i]);
    points.push_back(ExperimentConfig{base, params, cfg.out_dir / name.str()});
  }

  std::vector<json> rows(values.size());
  std::mutex mu;
  std::size_t next = 0;
  const auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= points.size()) return;
        i = next++;
      }
      json row{{"value", values[i]}, {"gamma", nullptr}, {"hist_width", nullptr},
               {"participation_ratio", nullptr}, {"wall_time_s", 0.0}, {"error", nullptr}};
      const auto start = std::chrono::steady_clock::now();
      try {
        const json summary = run_experiment(points[i]);
        if (summary.contains("gamma") && summary.at("gamma").is_object()) {
          row["gamma"] = summary.at("gamma").at("rate");
        }
        if (summary.contains("hist_width")) row["hist_width"] = summary.at("hist_width");
        if (summary.contains("participation_ratio")) {
          row["participation_ratio"] = summary.at("participation_ratio");
        }
      } catch (const std::exception& e) {
        row["error"] = e.what();
      }
      row["wall_time_s"] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      rows[i] = std::move(row);
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  json summary{{"base", base}, {"axis", axis}, {"rows", rows}};

  // Log-log slope of histogram width against the axis value.
  std::vector<double> lx, ly;
  for (const auto& row : rows) {
    if (row.at("hist_width").is_number() && row.at("value").get<double>() > 0 &&
        row.at("hist_width").get<double>() > 0) {
      lx.push_back(std::log(row.at("value").get<double>()));
      ly.push_back(std::log(row.at("hist_width").get<double>()));
    }
  }
  if (lx.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(lx.size());
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    summary["width_exponent"] = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  } else {
    summary["width_exponent"] = nullptr;
  }

  auto out = bundle.open_csv("sweep.csv", "value,gamma,hist_width,participation_ratio,wall_time_s,error");
  for (const auto& row : rows) {
    const auto cell = [](const json& v) {
      return v.is_number() ? fmt(v.get<double>()) : std::string();
    };
    out << fmt(row.at("value").get<double>()) << ',' << cell(row.at("gamma")) << ','
        << cell(row.at("hist_width")) << ',' << cell(row.at("participation_ratio")) << ','
        << fmt(row.at("wall_time_s").get<double>()) << ','
        << (row.at("error").is_null() ? "" : row.at("error").get<std::string>()) << "\n";
  }
  return summary;
}

json run_one(const ExperimentConfig& cfg, Bundle& bundle) {
  if (cfg.experiment == "orbitals") return run_orbitals(cfg, bundle);
  if (cfg.experiment == "evolve") return run_dynamics(cfg, bundle, DynKind::Evolve);
  if (cfg.experiment == "fig2") return run_dynamics(cfg, bundle, DynKind::Fig2);
  if (cfg.experiment == "fig3") return run_dynamics(cfg, bundle, DynKind::Fig3);
  if (cfg.experiment == "fig5") return run_dynamics(cfg, bundle, DynKind::Fig5);
  if (cfg.experiment == "fig4" || cfg.experiment == "chaos") return run_chaos(cfg, bundle);
  if (cfg.experiment == "stochastic") return run_stochastic(cfg, bundle);
  if (cfg.experiment == "sweep") return run_sweep(cfg, bundle);
  throw ConfigError("unknown experiment '" + cfg.experiment + "'");
}

}  // namespace

json default_params(const std::string& experiment) {
  if (experiment == "orbitals") {
    return json{{"seed", 1},        {"x_min", -8.0}, {"x_max", 8.0},
                {"n_points", 2048}, {"V0", 10.0},    {"sigma_b", 0.1},
                {"g", 1.0},         {"gI", 1.0},     {"mass_ratio", 2.0},
                {"probe_stiffness", 2.0}};
  }
  if (experiment == "evolve" || experiment == "fig2" || experiment == "fig5") {
    return dynamics_defaults(2);
  }
  if (experiment == "fig3") {
    json p = dynamics_defaults(1);
    p["N"] = 30;
    return p;
  }
  if (experiment == "fig4" || experiment == "chaos") {
    json p = dynamics_defaults(2);
    for (const char* k : {"t_end", "dt_sample", "tolerance", "initial_bath", "initial_probe",
                          "record_marginals", "fit_t0", "fit_t1", "final_window", "hist_t0",
                          "hist_t1"}) {
      p.erase(k);
    }
    p["N"] = 12;
    p["U01"] = nullptr;  // default U01_ratio * U0
    p["window_fraction"] = 0.2;
    p["mode"] = 0;
    p["min_states"] = 50;
    return p;
  }
  if (experiment == "stochastic") {
    return json{{"seed", 1},
                {"sigma", 0.034641016151377546},  // sqrt(1.2e-3)
                {"tau_c", nullptr},               // default hbar/sigma
                {"Js_eff", 0.095},
                {"eps0", 0.12},
                {"ensemble", 10000},
                {"t_end", 600.0},
                {"dt", 0.5},
                // Stop the damping fit before |z| reaches the ensemble noise
                // floor (~1/sqrt(M)), which flattens the tail of the series.
                {"fit_t0", 10.0},
                {"fit_t1", 150.0}};
  }
  if (experiment == "sweep") {
    return json{{"seed", 1},
                {"base", "fig2"},
                {"axis", "N"},
                {"values", json::array({12, 20, 30, 48})},
                {"workers", 0},
                {"overrides", json::object()}};
  }
  throw ConfigError("unknown experiment '" + experiment + "'");
}

ExperimentConfig resolve_config(const std::string& experiment, const std::string& config_path,
                                const std::vector<std::string>& overrides,
                                std::optional<std::uint64_t> seed,
                                std::optional<std::string> out_dir) {
  ExperimentConfig cfg;
  cfg.experiment = experiment;
  cfg.params = default_params(experiment);

  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot read config file " + config_path);
    json file;
    try {
      file = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError(config_path + ": " + e.what());
    }
    // A previously emitted manifest round-trips as a config.
    if (file.is_object() && file.contains("experiment") && file.contains("config")) {
      if (file.at("experiment").get<std::string>() != experiment) {
        throw ConfigError(config_path + ": manifest is for experiment '" +
                          file.at("experiment").get<std::string>() + "'");
      }
      file = file.at("config");
    }
    merge_checked(cfg.params, file, config_path);
  }

  for (const std::string& kv : overrides) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("override '" + kv + "' is not of the form key=value");
    }
    const std::string key = kv.substr(0, eq);
    const std::string raw = kv.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;  // bare strings
    json patch{{key, value}};
    merge_checked(cfg.params, patch, "--param " + key);
  }
  if (seed) cfg.params["seed"] = *seed;
  cfg.out_dir = out_dir ? fs::path(*out_dir) : fs::path("out") / experiment;
  return cfg;
}

std::string config_hash(const json& params) {
  const std::string dump = params.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json run_experiment(const ExperimentConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + cfg.out_dir.string());

  Bundle bundle;
  bundle.dir = cfg.out_dir;
  bundle.experiment = cfg.experiment;
  bundle.hash = config_hash(cfg.params);
  bundle.seed = seed_of(cfg.params);

  bundle.write_json("manifest.json",
                    json{{"experiment", cfg.experiment},
                         {"config", cfg.params},
                         {"config_hash", bundle.hash},
                         {"version", "fockbath 1.0.0"},
                         {"units", "hbar = 1, energies in hbar*omega0, times in 1/omega0"}});
  try {
    json summary = run_one(cfg, bundle);
    bundle.write_json("summary.json", summary);
    return summary;
  } catch (const ConfigError&) {
    bundle.discard();
    throw;
  } catch (const NumericalError&) {
    bundle.discard();
    throw;
  } catch (const std::exception& e) {
    bundle.discard();
    throw NumericalError(e.what());
  }
}

}  // namespace fockbath
