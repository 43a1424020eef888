// udk: sequences, discrepancy, refinements, parsing trees, fractals, QMC.
// Exit codes: 0 ok, 2 validation error, 3 budget exceeded, 4 experiment failure.

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>
#include <sstream>

#include "udk/cli.hpp"

namespace {

udk::Rational parse_number_exact(const std::string& s) {
  // "p/q", "123", or "0.125" as the exact scaled integer pair
  auto dot = s.find('.');
  if (dot == std::string::npos) return udk::parse_fraction(s, 0, s.size());
  long long ip = (dot == 0) ? 0 : udk::detail::parse_ll(s, 0, dot);
  std::string frac = s.substr(dot + 1);
  if (frac.empty()) return udk::Rational(ip);
  long long fp = udk::detail::parse_ll(s, dot + 1, s.size());
  udk::BigInt den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  udk::BigInt num = udk::BigInt(ip) * den + fp;
  return udk::Rational(num, den);
}

udk::PointSet read_points_csv(std::istream& in, unsigned want_dim) {
  udk::PointSet ps;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t b = 0;
    while (true) {
      std::size_t comma = line.find(',', b);
      std::string tok = line.substr(b, comma == std::string::npos ? std::string::npos : comma - b);
      try {
        row.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw udk::ParseError("bad number in CSV: " + tok, b);
      }
      if (comma == std::string::npos) break;
      b = comma + 1;
    }
    if (ps.dim == 0) ps.dim = static_cast<unsigned>(row.size());
    if (row.size() != ps.dim) throw udk::DimMismatch(static_cast<unsigned>(row.size()), ps.dim);
    ps.xs.insert(ps.xs.end(), row.begin(), row.end());
  }
  if (ps.dim == 0) throw udk::EmptyPointSet();
  if (want_dim != 0 && want_dim != ps.dim) throw udk::DimMismatch(ps.dim, want_dim);
  return ps;
}

std::string points_csv(const udk::PointSet& ps) {
  std::string out;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (unsigned k = 0; k < ps.dim; ++k) {
      if (k) out += ',';
      out += udk::fmt17(ps.at(i, k));
    }
    out += '\n';
  }
  return out;
}

std::string points_frac(const udk::PointSet& ps) {
  if (!ps.exact) throw udk::OutOfRange("this sequence has no exact-rational mode");
  std::string out;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (unsigned k = 0; k < ps.dim; ++k) {
      if (k) out += ',';
      out += udk::format_rational(ps.rat_at(i, k));
    }
    out += '\n';
  }
  return out;
}

std::string word_string(const udk::AddressWord& w) {
  std::string s;
  for (auto c : w) s += std::to_string(static_cast<int>(c));
  return s;
}

udk::RefinementRule rule_from_flags(const std::string& rho, const std::string& ls,
                                    const std::string& pisot) {
  int given = !rho.empty() + !ls.empty() + !pisot.empty();
  if (given > 1) throw udk::OutOfRange("give only one of --rho, --ls, --pisot");
  if (!ls.empty()) return udk::parse_rho("ls:" + ls);
  if (!pisot.empty()) return udk::parse_rho("pisot:" + pisot);
  if (!rho.empty()) return udk::parse_rho(rho);
  return udk::parse_rho("1/2,1/2");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"uniform distribution kit: low-discrepancy sequences, Kakutani "
               "refinements, Khodak trees, IFS fractals"};
  app.require_subcommand(1);

  std::size_t cap = udk::kDefaultIntervalCap;
  if (const char* env = std::getenv("UDK_BUDGET")) {
    char* endp = nullptr;
    unsigned long long v = std::strtoull(env, &endp, 10);
    if (endp && *endp == '\0' && v > 0) cap = static_cast<std::size_t>(v);
  }
  int rc = 0;

  // --- gen ---------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate a point sequence");
  std::string gen_seq, gen_bases = "2,3", gen_format = "csv";
  unsigned gen_base = 2;
  std::size_t gen_count = 0;
  double gen_theta = 0.61803398874989485;
  gen->add_option("sequence", gen_seq, "vdc|halton|hammersley|kronecker")->required();
  gen->add_option("--count", gen_count, "number of points")->required();
  gen->add_option("--base", gen_base, "vdc base (default 2)");
  gen->add_option("--bases", gen_bases, "comma-separated bases (halton/hammersley)");
  gen->add_option("--theta", gen_theta, "kronecker rotation (default golden)");
  gen->add_option("--format", gen_format, "csv|json|frac");
  gen->callback([&] {
    if (gen_count < 1) throw udk::OutOfRange("--count must be at least 1");
    udk::PointSet ps;
    if (gen_seq == "vdc") {
      ps = udk::van_der_corput(gen_count, gen_base);
    } else if (gen_seq == "halton" || gen_seq == "hammersley") {
      std::vector<udk::Base> bases;
      for (long long b : udk::parse_int_list(gen_bases)) {
        if (b < 2) throw udk::OutOfRange("bases must be >= 2");
        bases.push_back(static_cast<udk::Base>(b));
      }
      ps = (gen_seq == "halton") ? udk::halton(gen_count, bases)
                                 : udk::hammersley(gen_count, bases);
    } else if (gen_seq == "kronecker") {
      ps = udk::kronecker(gen_count, std::vector<double>{gen_theta});
    } else {
      throw udk::OutOfRange("unknown sequence: " + gen_seq);
    }
    if (gen_format == "csv") {
      std::cout << points_csv(ps);
    } else if (gen_format == "frac") {
      std::cout << points_frac(ps);
    } else if (gen_format == "json") {
      udk::Json pts = udk::Json::array();
      for (std::size_t i = 0; i < ps.size(); ++i) {
        udk::Json row = udk::Json::array();
        for (unsigned k = 0; k < ps.dim; ++k) row.push_back(ps.at(i, k));
        pts.push_back(row);
      }
      std::cout << udk::Json{{"schema", 1}, {"points", pts}}.dump() << "\n";
    } else {
      throw udk::OutOfRange("unknown format: " + gen_format);
    }
  });

  // --- disc --------------------------------------------------------------
  auto* disc = app.add_subcommand("disc", "discrepancy of a point set or partition");
  std::string disc_kind, disc_input = "-";
  unsigned disc_dim = 0;
  disc->add_option("kind", disc_kind, "star|extreme|partition")->required();
  disc->add_option("--input", disc_input, "CSV file of points, - for stdin");
  disc->add_option("--dim", disc_dim, "expected dimension");
  disc->callback([&] {
    udk::PointSet ps;
    if (disc_input == "-") {
      ps = read_points_csv(std::cin, disc_dim);
    } else {
      std::ifstream f(disc_input);
      if (!f) throw udk::OutOfRange("cannot read " + disc_input);
      ps = read_points_csv(f, disc_dim);
    }
    double v = 0;
    if (disc_kind == "star") {
      v = (ps.dim == 1) ? udk::star_discrepancy_1d(ps) : udk::star_discrepancy_dd(ps);
    } else if (disc_kind == "extreme") {
      v = udk::extreme_discrepancy_1d(ps);
    } else if (disc_kind == "partition") {
      if (ps.dim != 1) throw udk::UnsupportedDim(ps.dim);
      v = udk::partition_discrepancy(ps.xs);
    } else {
      throw udk::OutOfRange("unknown kind: " + disc_kind);
    }
    std::cout << udk::Json{{"schema", 1}, {"n", ps.size()}, {"value", v}}.dump() << "\n";
  });

  // --- refine ------------------------------------------------------------
  auto* refine = app.add_subcommand("refine", "iterated rho-refinement of [0,1)");
  std::string rf_rho, rf_ls, rf_pisot, rf_emit = "counts";
  unsigned rf_steps = 0;
  refine->add_option("--rho", rf_rho, "fractions, e.g. 1/4,1/4,1/2");
  refine->add_option("--ls", rf_ls, "L,S");
  refine->add_option("--pisot", rf_pisot, "a1,a2,...");
  refine->add_option("--steps", rf_steps, "number of refinement steps")->required();
  refine->add_option("--emit", rf_emit, "breaks|counts|disc");
  refine->callback([&] {
    udk::RefinementRule rule = rule_from_flags(rf_rho, rf_ls, rf_pisot);
    udk::Refiner ref(rule, cap);
    if (rf_emit == "breaks") {
      ref.run(rf_steps);
      for (double b : ref.breakpoints()) std::cout << udk::fmt17(b) << "\n";
      return;
    }
    if (rf_emit != "counts" && rf_emit != "disc")
      throw udk::OutOfRange("unknown emit mode: " + rf_emit);
    bool with_d = (rf_emit == "disc");
    udk::Json steps = udk::Json::array();
    for (unsigned n = 0; n <= rf_steps; ++n) {
      if (n > 0) ref.step();
      udk::Json row = {{"n", n},
                       {"k", ref.k()},
                       {"A_n", ref.max_length()},
                       {"a_n", ref.min_length()}};
      if (with_d) row["D_n"] = udk::partition_discrepancy(ref.breakpoints());
      steps.push_back(row);
    }
    std::cout << udk::Json{{"schema", 1}, {"steps", steps}}.dump() << "\n";
  });

  // --- khodak ------------------------------------------------------------
  auto* kh = app.add_subcommand("khodak", "parsing-tree counts and spectral data");
  kh->require_subcommand(1);
  std::string kh_rho, kh_ls, kh_pisot;
  auto add_rule_flags = [&](CLI::App* sub) {
    sub->add_option("--rho", kh_rho, "fractions, e.g. 1/4,1/4,1/2");
    sub->add_option("--ls", kh_ls, "L,S");
    sub->add_option("--pisot", kh_pisot, "a1,a2,...");
  };
  auto* kh_an = kh->add_subcommand("analyze", "spectral constants of a rule");
  add_rule_flags(kh_an);
  kh_an->callback([&] {
    udk::RefinementRule rule = rule_from_flags(kh_rho, kh_ls, kh_pisot);
    udk::ProbabilityVector pv = udk::probvec_from_rule(rule);
    udk::SpectralData sd = udk::spectral_analysis(pv);
    udk::Json roots = udk::Json::array();
    for (std::size_t i = 0; i < sd.roots.size(); ++i)
      roots.push_back({{"re", sd.roots[i].real()},
                       {"im", sd.roots[i].imag()},
                       {"mult", sd.multiplicities[i]}});
    std::cout << udk::Json{{"schema", 1},
                           {"lambda", sd.lambda},
                           {"nj", sd.nj},
                           {"entropy", sd.entropy},
                           {"c_prime", sd.c_prime},
                           {"eta", sd.eta},
                           {"d", sd.d},
                           {"roots", roots}}
                     .dump()
              << "\n";
  });
  auto* kh_ct = kh->add_subcommand("count", "M_r and its prediction");
  std::string kh_r = "1/64";
  add_rule_flags(kh_ct);
  kh_ct->add_option("--r", kh_r, "threshold r in (0,1], fraction or decimal");
  kh_ct->callback([&] {
    udk::RefinementRule rule = rule_from_flags(kh_rho, kh_ls, kh_pisot);
    udk::ProbabilityVector pv = udk::probvec_from_rule(rule);
    udk::Rational r = parse_number_exact(kh_r);
    std::uint64_t M = pv.exact ? udk::m_of_r(pv, r) : udk::m_of_r(pv, udk::to_double(r));
    udk::Json out = {{"schema", 1}, {"r", udk::format_rational(r)}, {"M_r", M}};
    if (auto rel = udk::detect_rational_relation(pv)) {
      udk::SpectralData sd = udk::spectral_analysis(pv);
      double pred = udk::predicted_mr_rational(sd, static_cast<unsigned>(pv.m()),
                                               udk::to_double(r));
      out["prediction"] = pred;
      out["rel_error"] = std::abs(static_cast<double>(M) - pred) / static_cast<double>(M);
    } else {
      out["prediction"] = nullptr;
      out["rel_error"] = nullptr;
    }
    std::cout << out.dump() << "\n";
  });
  auto* kh_z = kh->add_subcommand("zeros", "zeros of 1 - p^{-s} - q^{-s}");
  double kh_p = 0.3;
  unsigned kh_boxes = 10;
  kh_z->add_option("--p", kh_p, "first probability (q = 1-p)")->required();
  kh_z->add_option("--boxes", kh_boxes, "number of boxes K (zeros for 1 <= |k| <= K)");
  kh_z->callback([&] {
    auto zeros = udk::dirichlet_zeros(kh_p, kh_boxes);
    std::cout << "k,Re,Im\n";
    for (const auto& z : zeros)
      std::cout << z.k << ',' << udk::fmt17(z.s.real()) << ',' << udk::fmt17(z.s.imag())
                << "\n";
  });

  // --- fractal -----------------------------------------------------------
  auto* fr = app.add_subcommand("fractal", "IFS sequences and partitions");
  fr->require_subcommand(1);
  std::string fr_preset = "sierpinski-right", fr_ratios;
  std::size_t fr_points = 0;
  unsigned fr_steps = 0;
  bool fr_coords = false;
  auto* fr_gen = fr->add_subcommand("gen", "generated point sequence with addresses");
  fr_gen->add_option("--preset", fr_preset,
                     "cantor|sierpinski-right|sierpinski-equilateral|koch|unit-interval-m");
  fr_gen->add_option("--points", fr_points, "number of points")->required();
  fr_gen->add_flag("--coords", fr_coords, "prepend coordinates to each row");
  fr_gen->callback([&] {
    udk::IFSSystem sys = udk::ifs_preset(fr_preset);
    auto out = udk::vdc_fractal_points(sys, fr_points);
    for (std::size_t i = 0; i < fr_points; ++i) {
      if (fr_coords) {
        for (unsigned k = 0; k < sys.dim; ++k)
          std::cout << udk::fmt17(out.points.at(i, k)) << ',';
      }
      std::cout << word_string(out.words[i]) << "\n";
    }
  });
  auto* fr_disc = fr->add_subcommand("disc", "elementary discrepancy of the sequence");
  fr_disc->add_option("--preset", fr_preset,
                      "cantor|sierpinski-right|sierpinski-equilateral|koch|unit-interval-m");
  fr_disc->add_option("--points", fr_points, "prefix length N")->required();
  fr_disc->callback([&] {
    udk::IFSSystem sys = udk::ifs_preset(fr_preset);
    auto out = udk::vdc_fractal_points(sys, fr_points);
    double v = udk::elementary_discrepancy_points(out.words, fr_points,
                                                  static_cast<unsigned>(sys.m()));
    std::cout << udk::Json{{"schema", 1}, {"n", fr_points}, {"value", v}}.dump() << "\n";
  });
  auto* fr_part = fr->add_subcommand("partition", "Khodak-driven fractal partition");
  fr_part->add_option("--ratios", fr_ratios, "contraction ratios, e.g. 1/2,1/4");
  fr_part->add_option("--preset", fr_preset, "preset system instead of --ratios");
  fr_part->add_option("--steps", fr_steps, "split rounds")->required();
  fr_part->callback([&] {
    udk::IFSSystem sys = fr_ratios.empty()
                             ? udk::ifs_preset(fr_preset)
                             : udk::ifs_from_ratios(udk::parse_fraction_list(fr_ratios));
    udk::FractalPartition fp = udk::khodak_fractal_partition(sys, fr_steps, cap);
    std::cout << "address,P\n";
    for (std::size_t i = 0; i < fp.words.size(); ++i)
      std::cout << word_string(fp.words[i]) << ',' << udk::fmt17(fp.probs[i]) << "\n";
  });

  // --- qmc ---------------------------------------------------------------
  auto* qmc = app.add_subcommand("qmc", "quasi-Monte Carlo integration certificate");
  std::string qm_seq = "vdc", qm_integrand = "id";
  std::size_t qm_count = 0;
  std::uint64_t qm_seed = 1;
  qmc->add_option("--sequence", qm_seq, "vdc|halton|reorder");
  qmc->add_option("--integrand", qm_integrand, "id|sq|ramp|prod2");
  qmc->add_option("--count", qm_count, "number of points")->required();
  qmc->add_option("--seed", qm_seed, "seed for the reordering stream");
  qmc->callback([&] {
    if (qm_count < 1) throw udk::OutOfRange("--count must be at least 1");
    const udk::TestIntegrand& f = udk::integrand_by_name(qm_integrand);
    udk::PointSet ps;
    if (qm_seq == "vdc") {
      ps = udk::van_der_corput(qm_count, 2);
    } else if (qm_seq == "halton") {
      ps = udk::halton(qm_count, {2, 3});
    } else if (qm_seq == "reorder") {
      std::vector<std::vector<double>> blocks;
      udk::Refiner ref(udk::ls_rule(1, 1), cap);
      std::size_t total = 0;
      while (total < qm_count) {
        ref.step();
        blocks.push_back(ref.breakpoints());
        total += blocks.back().size();
      }
      ps = udk::sequential_random_reordering(std::move(blocks), qm_seed);
      ps.xs.resize(qm_count);
    } else {
      throw udk::OutOfRange("unknown sequence: " + qm_seq);
    }
    udk::KHReport rep = udk::koksma_hlawka_check(ps, f);
    std::cout << udk::Json{{"schema", 1},
                           {"estimate", rep.estimate},
                           {"exact", rep.exact},
                           {"error", rep.error},
                           {"dstar", rep.dstar},
                           {"kh_bound", rep.bound},
                           {"satisfied", rep.satisfied}}
                     .dump()
              << "\n";
  });

  // --- experiment --------------------------------------------------------
  auto* ex = app.add_subcommand("experiment", "regenerate an acceptance table");
  std::string ex_name, ex_out = "udk-out";
  ex->add_option("name", ex_name, "vdc-bound|fibonacci-discrepancy|khodak-rational|"
                                  "irrational-p03|fractal-elem|qmc-vs-mc")
      ->required();
  ex->add_option("--out", ex_out, "output directory (default udk-out)");
  ex->callback([&] {
    udk::ExperimentResult res = udk::run_experiment(ex_name, ex_out, cap);
    std::cout << res.summary.dump(2) << "\n";
    if (!res.pass) rc = 4;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const udk::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const udk::BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return rc;
}
