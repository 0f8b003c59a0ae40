// thinannuli: batch driver for the lattice-point and annulus experiments.
//
// Exit codes: 0 ok, 1 domain error, 2 usage error, 3 enumeration budget
// exceeded. THINANNULI_BUDGET overrides the enumeration cap.

#include "thinannuli/close_pairs.hpp"
#include "thinannuli/dioph.hpp"
#include "thinannuli/ensemble.hpp"
#include "thinannuli/geometry.hpp"
#include "thinannuli/io.hpp"
#include "thinannuli/lattice.hpp"
#include "thinannuli/smooth.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <thread>

using namespace thinannuli;
using nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kDomain = 1, kUsage = 2, kBudget = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double real_arg(const std::string& name, const std::string& text) {
  try {
    const double v = static_cast<double>(parse_real(text));
    if (!std::isfinite(v)) throw DomainError("not finite");
    return v;
  } catch (const DomainError& e) {
    throw UsageError("--" + name + ": " + e.what());
  }
}

struct LatticeFlags {
  std::string alpha = "pi-3";
  std::string beta = "e/2";

  void add(CLI::App* cmd, bool required) {
    auto* a = cmd->add_option("--alpha", alpha, "alpha (expression such as pi-3 allowed)");
    auto* b = cmd->add_option("--beta", beta, "beta > 0 (expression such as e/2 allowed)");
    if (required) {
      a->required();
      b->required();
    } else {
      a->capture_default_str();
      b->capture_default_str();
    }
  }
  LatticeSpec lattice() const { return LatticeSpec(real_arg("alpha", alpha), real_arg("beta", beta)); }
};

RunConfig base_config(const std::string& command, const LatticeSpec& lattice) {
  RunConfig cfg;
  cfg.command = command;
  cfg.alpha = lattice.alpha();
  cfg.beta = lattice.beta();
  return cfg;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot open " + path + " for writing");
  out << content;
}

void emit(const ordered_json& doc, const std::string& out_prefix) {
  if (out_prefix.empty())
    std::cout << dump(doc);
  else
    write_file(out_prefix + ".json", dump(doc));
}

Basis<double> parse_basis(const std::string& text) {
  // "x1,x2,x3;y1,y2,y3" -> columns
  std::vector<std::vector<double>> vectors;
  std::stringstream rows(text);
  std::string row;
  while (std::getline(rows, row, ';')) {
    std::vector<double> v;
    std::stringstream cols(row);
    std::string cell;
    while (std::getline(cols, cell, ',')) v.push_back(real_arg("basis", cell));
    vectors.push_back(std::move(v));
  }
  if (vectors.empty()) throw UsageError("--basis: empty");
  const auto n = static_cast<Eigen::Index>(vectors.front().size());
  Basis<double> B(n, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (static_cast<Eigen::Index>(vectors[j].size()) != n)
      throw UsageError("--basis: vectors must have equal length");
    for (Eigen::Index i = 0; i < n; ++i) B(i, static_cast<Eigen::Index>(j)) = vectors[j][static_cast<std::size_t>(i)];
  }
  return B;
}

ordered_json basis_json(const Basis<double>& B) {
  auto j = ordered_json::array();
  for (Eigen::Index c = 0; c < B.cols(); ++c) {
    auto v = ordered_json::array();
    for (Eigen::Index r = 0; r < B.rows(); ++r) v.push_back(B(r, c));
    j.push_back(v);
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice points in thin annuli: counting, ensembles, close pairs, probes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  app.add_option("--threads", threads, "worker threads for ensembles")
      ->check(CLI::Range(1u, 1024u))
      ->capture_default_str();

  // count
  auto* count = app.add_subcommand("count", "disc or annulus count, error term, sharp statistic");
  LatticeFlags count_lat;
  count_lat.add(count, true);
  double count_t = 0.0;
  std::optional<double> count_rho;
  count->add_option("--t", count_t, "radius t >= 0")->required()->check(CLI::NonNegativeNumber);
  count->add_option("--rho", count_rho, "annulus width rho > 0")->check(CLI::PositiveNumber);

  // distribution
  auto* dist = app.add_subcommand("distribution", "ensemble of S(t, rho) over t ~ [T, 2T]");
  LatticeFlags dist_lat;
  dist_lat.add(dist, false);
  double dist_T = 0.0;
  std::int64_t dist_samples = 0;
  std::uint64_t dist_seed = 1;
  std::optional<double> dist_rho, dist_rho_exp;
  std::string dist_weight = "uniform", dist_stat = "sharp", dist_out;
  double dist_M = 1e4;
  int dist_cap = 6;
  dist->add_option("--T", dist_T, "window base T")->required()->check(CLI::PositiveNumber);
  dist->add_option("--samples", dist_samples, "sample count")->required()->check(CLI::PositiveNumber);
  dist->add_option("--seed", dist_seed, "RNG seed")->required();
  auto* rho_opt = dist->add_option("--rho", dist_rho, "fixed annulus width")->check(CLI::PositiveNumber);
  dist->add_option("--rho-exponent", dist_rho_exp, "rho = T^-exponent (default 0.1)")
      ->check(CLI::PositiveNumber)
      ->excludes(rho_opt);
  dist->add_option("--weight", dist_weight, "uniform | smooth")
      ->check(CLI::IsMember({"uniform", "smooth"}))
      ->capture_default_str();
  dist->add_option("--statistic", dist_stat, "sharp | smooth")
      ->check(CLI::IsMember({"sharp", "smooth"}))
      ->capture_default_str();
  dist->add_option("--M", dist_M, "smoothing scale for --statistic smooth")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  dist->add_option("--moment-cap", dist_cap, "highest normalized moment")
      ->check(CLI::Range(1, 12))
      ->capture_default_str();
  dist->add_option("--out", dist_out, "output prefix: writes PREFIX.csv and PREFIX.json");

  // close-pairs
  auto* pairs = app.add_subcommand("close-pairs", "close-pair counts A(R, delta) and scaling table");
  LatticeFlags pairs_lat;
  pairs_lat.add(pairs, false);
  std::vector<double> pairs_R;
  double pairs_delta = 1.0;
  std::string pairs_out;
  pairs->add_option("--R", pairs_R, "squared-norm scale(s)")->required()->check(CLI::PositiveNumber);
  pairs->add_option("--delta", pairs_delta, "squared-norm window")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  pairs->add_option("--out", pairs_out, "output prefix: writes PREFIX.csv and PREFIX.json");

  // dioph
  auto* dioph = app.add_subcommand("dioph", "Diophantine probes");
  LatticeFlags dioph_lat;
  dioph_lat.add(dioph, false);
  std::vector<std::string> dioph_tuple, dioph_pair;
  std::int64_t dioph_qmax = 100, dioph_height = 10, dioph_m = 2;
  int dioph_degree = 2;
  double dioph_bound = 50.0;
  bool dioph_sqrt = false, dioph_all = false;
  std::string dioph_out;
  auto* tuple_opt = dioph->add_option("--tuple", dioph_tuple, "linear form values (expressions)");
  dioph->add_option("--qmax", dioph_qmax, "height cap for --tuple")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  auto* pair_opt = dioph->add_option("--pair", dioph_pair, "polynomial point x y")
                       ->expected(2)
                       ->excludes(tuple_opt);
  dioph->add_option("--degree", dioph_degree, "polynomial degree")
      ->check(CLI::Range(1, 3))
      ->capture_default_str();
  dioph->add_option("--height", dioph_height, "height cap for --pair")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  auto* sqrt_opt = dioph->add_flag("--sqrt-gap", dioph_sqrt, "signed square-root sums of dual norms")
                       ->excludes(tuple_opt)
                       ->excludes(pair_opt);
  dioph->add_option("--m", dioph_m, "terms in the square-root sum")
      ->check(CLI::Range(2, 4))
      ->capture_default_str();
  dioph->add_option("--bound", dioph_bound, "dual squared-norm bound")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  dioph->add_flag("--all-norms", dioph_all, "do not restrict to primitive (a, b)");
  dioph->add_option("--out", dioph_out, "output prefix: writes PREFIX.json (and PREFIX.csv)");
  (void)sqrt_opt;

  // smooth
  auto* smooth = app.add_subcommand("smooth", "smoothed count / statistic and sharp-vs-smooth experiments");
  LatticeFlags smooth_lat;
  smooth_lat.add(smooth, false);
  double smooth_M = 1e4, smooth_L = 10.0;
  std::optional<double> smooth_t, smooth_T;
  std::int64_t smooth_samples = 500;
  std::uint64_t smooth_seed = 1;
  std::string smooth_out;
  smooth->add_option("--M", smooth_M, "truncation scale")->check(CLI::PositiveNumber)->capture_default_str();
  smooth->add_option("--L", smooth_L, "inverse width")->check(CLI::PositiveNumber)->capture_default_str();
  auto* t_opt = smooth->add_option("--t", smooth_t, "evaluate at a single t")->check(CLI::PositiveNumber);
  smooth->add_option("--T", smooth_T, "run the ensemble experiments at window T")
      ->check(CLI::PositiveNumber)
      ->excludes(t_opt);
  smooth->add_option("--samples", smooth_samples, "ensemble samples")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  smooth->add_option("--seed", smooth_seed, "RNG seed")->capture_default_str();
  smooth->add_option("--out", smooth_out, "output prefix: writes PREFIX.json");

  // geometry
  auto* geometry = app.add_subcommand("geometry", "successive minima, stretch covolumes, box counts");
  geometry->require_subcommand(1);
  std::string geo_basis;
  auto* minima = geometry->add_subcommand("minima", "successive minima");
  std::string minima_basis = "1,0,0;0,1,0;0,0,1";
  minima->add_option("--basis", minima_basis, "basis vectors 'x1,x2,..;y1,y2,..'")->capture_default_str();
  auto* stretch = geometry->add_subcommand("stretch", "covolume before/after A_t");
  std::string stretch_basis = "1,0,0;0,1,1";
  double stretch_t = 1.0;
  stretch->add_option("--basis", stretch_basis, "basis vectors")->capture_default_str();
  stretch->add_option("--t", stretch_t, "stretch factor")->required()->check(CLI::PositiveNumber);
  auto* box = geometry->add_subcommand("box", "lattice points in V(delta)");
  std::string box_basis = "1,0,0;0,1,0;0,0,1";
  double box_delta = 1.0, box_tau = 1.0, box_beta = 2.0;
  box->add_option("--basis", box_basis, "basis vectors")->capture_default_str();
  box->add_option("--delta", box_delta, "delta")->check(CLI::NonNegativeNumber)->capture_default_str();
  box->add_option("--tau", box_tau, "tau")->check(CLI::PositiveNumber)->capture_default_str();
  box->add_option("--box-beta", box_beta, "last side is delta*beta/2")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  (void)geo_basis;

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*count) {
      const LatticeSpec lat = count_lat.lattice();
      RunConfig cfg = base_config("count", lat);
      cfg.parameters["t"] = count_t;
      if (count_rho) cfg.parameters["rho"] = *count_rho;
      ordered_json doc = make_document(cfg);
      if (count_rho) {
        const AnnulusQuery q{count_t, *count_rho};
        doc["count"] = count_annulus(lat, q);
        doc["kind"] = "annulus";
        doc["expected_area"] = std::numbers::pi / lat.beta() * (2.0 * q.t * q.rho + q.rho * q.rho);
        if (count_t > 0.0) doc["sharp_statistic"] = sharp_statistic(lat, q);
      } else {
        doc["count"] = count_disc(lat, count_t);
        doc["kind"] = "disc";
        doc["disc_error"] = disc_error(lat, count_t);
        if (count_t > 0.0) doc["normalized_disc_error"] = normalized_disc_error(lat, count_t);
      }
      emit(doc, "");
      return kOk;
    }

    if (*dist) {
      const LatticeSpec lat = dist_lat.lattice();
      EnsembleConfig ec;
      ec.T = dist_T;
      ec.samples = dist_samples;
      ec.seed = dist_seed;
      ec.weight = dist_weight == "smooth" ? Weighting::smooth_omega : Weighting::uniform;
      if (dist_rho) ec.rho_rule.fixed = *dist_rho;
      if (dist_rho_exp) ec.rho_rule.exponent = *dist_rho_exp;
      ec.moment_cap = dist_cap;
      ec.threads = threads;
      if (ec.samples < 2) throw DomainError("variance needs at least 2 samples");
      const double rho = ec.rho_rule.rho(ec.T);

      RunConfig cfg = base_config("distribution", lat);
      cfg.seed = dist_seed;
      cfg.output = dist_out;
      cfg.format = "csv+json";
      cfg.parameters = {{"T", dist_T},         {"samples", dist_samples}, {"rho", rho},
                        {"weight", dist_weight}, {"statistic", dist_stat}, {"moment_cap", dist_cap}};
      if (dist_stat == "smooth") cfg.parameters["M"] = dist_M;

      Statistic stat;
      std::optional<SmoothStatistic> smooth_stat;
      if (dist_stat == "smooth") {
        SmoothingParams sp{dist_M, 1.0 / rho};
        sp.validate();
        smooth_stat.emplace(lat, sp);
        stat = [&](double t) { return (*smooth_stat)(t); };
      } else {
        stat = [&](double t) { return sharp_statistic(lat, {t, rho}); };
      }
      const double sigma2 = predicted_sigma_squared(lat, rho);
      SampleSeries series;
      const MomentReport report = moment_report(stat, ec, std::sqrt(sigma2), &series);

      ordered_json doc = make_document(cfg);
      doc["report"] = to_json(report);
      doc["variance_ratio"] = report.variance / sigma2;
      if (!dist_out.empty()) {
        std::ostringstream csv;
        write_series_csv(csv, cfg, series);
        write_file(dist_out + ".csv", csv.str());
      }
      emit(doc, dist_out);
      return kOk;
    }

    if (*pairs) {
      const LatticeSpec lat = pairs_lat.lattice();
      RunConfig cfg = base_config("close-pairs", lat);
      cfg.output = pairs_out;
      cfg.parameters = {{"R", pairs_R}, {"delta", pairs_delta}};
      ordered_json doc = make_document(cfg);
      auto rows = ordered_json::array();
      std::vector<ScalingRow> table;
      for (const double R : pairs_R) {
        const std::int64_t c = count_close_pairs(lat, {R, pairs_delta});
        const double norm = pairs_delta > 0.0 && R > 1.0 ? c / (R * pairs_delta * std::log(R)) : NAN;
        table.push_back({R, pairs_delta, c, norm});
        rows.push_back({{"R", R},
                        {"delta", pairs_delta},
                        {"count", c},
                        {"normalized", std::isfinite(norm) ? ordered_json(norm) : ordered_json(nullptr)}});
      }
      doc["rows"] = rows;
      if (pairs_R.size() == 1) doc["count"] = table.front().count;
      if (!pairs_out.empty()) {
        std::ostringstream csv;
        write_scaling_csv(csv, cfg, table);
        write_file(pairs_out + ".csv", csv.str());
      }
      emit(doc, pairs_out);
      return kOk;
    }

    if (*dioph) {
      const LatticeSpec lat = dioph_lat.lattice();
      RunConfig cfg = base_config("dioph", lat);
      cfg.output = dioph_out;
      ordered_json doc;
      if (!dioph_tuple.empty() || !dioph_pair.empty()) {
        ExponentFit fit;
        if (!dioph_tuple.empty()) {
          DiophQuery q;
          for (const auto& s : dioph_tuple) {
            (void)real_arg("tuple", s);
            q.tuple.push_back(parse_real(s));
          }
          q.height_cap = dioph_qmax;
          cfg.parameters = {{"mode", "linear"}, {"tuple", dioph_tuple}, {"qmax", dioph_qmax}};
          fit = linear_form_minimum(q);
        } else {
          for (const auto& s : dioph_pair) (void)real_arg("pair", s);
          cfg.parameters = {{"mode", "polynomial"}, {"pair", dioph_pair}, {"degree", dioph_degree},
                            {"height", dioph_height}};
          fit = polynomial_minimum(parse_real(dioph_pair[0]), parse_real(dioph_pair[1]), dioph_degree,
                                   dioph_height, default_budget());
        }
        doc = make_document(cfg);
        doc["fit"] = to_json(fit);
        if (!dioph_out.empty()) {
          std::ostringstream csv;
          write_minima_csv(csv, cfg, fit);
          write_file(dioph_out + ".csv", csv.str());
        }
      } else if (dioph_sqrt) {
        cfg.parameters = {{"mode", "sqrt-gap"}, {"m", dioph_m}, {"bound", dioph_bound},
                          {"filter", dioph_all ? "all" : "primitive"}};
        doc = make_document(cfg);
        doc["gap"] = to_json(sqrt_sum_gap(lat, dioph_bound, static_cast<int>(dioph_m),
                                          dioph_all ? DualFilter::all : DualFilter::primitive,
                                          default_budget()));
      } else {
        throw UsageError("dioph: one of --tuple, --pair, --sqrt-gap is required");
      }
      emit(doc, dioph_out);
      return kOk;
    }

    if (*smooth) {
      const LatticeSpec lat = smooth_lat.lattice();
      SmoothingParams sp{smooth_M, smooth_L};
      sp.validate();
      RunConfig cfg = base_config("smooth", lat);
      cfg.output = smooth_out;
      cfg.seed = smooth_seed;
      cfg.parameters = {{"M", smooth_M}, {"L", smooth_L}};
      const DualSpectrum spectrum(lat, smooth_M, sp.kernel);
      ordered_json doc;
      if (smooth_t) {
        cfg.parameters["t"] = *smooth_t;
        doc = make_document(cfg);
        const double t = *smooth_t;
        doc["smooth_disc_count"] = smooth_disc_count(spectrum, t);
        doc["count_disc"] = count_disc(lat, t);
        doc["smooth_statistic"] = smooth_statistic(spectrum, smooth_L, t);
        doc["smooth_statistic_two_call"] = smooth_statistic_two_call(spectrum, smooth_L, t);
        doc["sharp_statistic"] = sharp_statistic(lat, {t, 1.0 / smooth_L});
      } else if (smooth_T) {
        EnsembleConfig ec;
        ec.T = *smooth_T;
        ec.samples = smooth_samples;
        ec.seed = smooth_seed;
        ec.weight = Weighting::smooth_omega;
        ec.threads = threads;
        cfg.parameters["T"] = *smooth_T;
        cfg.parameters["samples"] = smooth_samples;
        doc = make_document(cfg);
        const SmoothStatistic s(spectrum, smooth_L);
        const auto smooth_fn = [&](double t) { return s(t); };
        const double rho = 1.0 / smooth_L;
        const double diff = sharp_smooth_difference_moment(
            [&](double t) { return sharp_statistic(lat, {t, rho}); }, smooth_fn, ec);
        const double mean = mean_decay_check(smooth_fn, ec);
        doc["difference_second_moment"] = diff;
        doc["sqrtM_times_difference"] = std::sqrt(smooth_M) * diff;
        doc["mean_abs"] = mean;
        doc["sqrtT_times_mean_abs"] = std::sqrt(*smooth_T) * mean;
      } else {
        doc = make_document(cfg);
      }
      doc["spectral_sigma_squared"] = spectral_sigma_squared(spectrum, smooth_L);
      doc["predicted_sigma_squared"] = predicted_sigma_squared(lat, 1.0 / smooth_L);
      doc["regime_warning"] = sp.regime_warning();
      emit(doc, smooth_out);
      return kOk;
    }

    if (*geometry) {
      RunConfig cfg;
      cfg.command = "geometry";
      cfg.alpha = NAN;
      cfg.beta = NAN;
      ordered_json doc;
      if (*minima) {
        const GeneralLattice<double> lat(parse_basis(minima_basis));
        cfg.command = "geometry minima";
        cfg.parameters = {{"basis", basis_json(lat.basis())}};
        doc = make_document(cfg);
        auto arr = ordered_json::array();
        for (const auto& m : successive_minima(lat, static_cast<int>(lat.rank()))) {
          std::vector<int> coeff(m.coefficients.data(), m.coefficients.data() + m.coefficients.size());
          arr.push_back({{"length", m.length}, {"coefficients", coeff}});
        }
        doc["minima"] = arr;
        doc["covolume"] = lat.covolume();
      } else if (*stretch) {
        const GeneralLattice<double> lat(parse_basis(stretch_basis));
        cfg.command = "geometry stretch";
        cfg.parameters = {{"basis", basis_json(lat.basis())}, {"t", stretch_t}};
        doc = make_document(cfg);
        const auto r = stretch_determinant_check(lat, stretch_t);
        doc["before"] = r.before;
        doc["after"] = r.after;
        doc["bound"] = stretch_t * r.before;
        doc["holds"] = stretch_t < 1.0 || r.after <= stretch_t * r.before * (1.0 + 1e-9);
        doc["equality"] = std::abs(r.after - r.before) <= 1e-12 * r.before ||
                          std::abs(r.after - stretch_t * r.before) <= 1e-12 * r.after;
      } else if (*box) {
        const GeneralLattice<double> lat(parse_basis(box_basis));
        cfg.command = "geometry box";
        cfg.parameters = {{"basis", basis_json(lat.basis())}, {"delta", box_delta}, {"tau", box_tau},
                          {"box_beta", box_beta}};
        doc = make_document(cfg);
        const BoxSpec<double> spec{box_delta, box_tau, box_beta};
        const auto c = count_box_points(lat, spec);
        doc["count"] = c;
        doc["volume_over_covolume"] = spec.volume(lat.dimension()) / lat.covolume();
      }
      emit(doc, "");
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kDomain;
  } catch (const InconclusiveError& e) {
    std::cerr << "inconclusive: " << e.what() << '\n';
    return kDomain;
  }
  return kUsage;
}
