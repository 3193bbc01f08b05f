#include "CLI11.hpp"

#include "crossnorm/channels.hpp"
#include "crossnorm/decompositions.hpp"
#include "crossnorm/entropy.hpp"
#include "crossnorm/errors.hpp"
#include "crossnorm/gamma.hpp"
#include "crossnorm/json_io.hpp"
#include "crossnorm/states.hpp"
#include "crossnorm/verify.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace crossnorm;

namespace {

struct Options {
  std::string input;
  std::string output;
  std::uint64_t seed = 0;
  int restarts = 16;
  int max_iter = 500;
  double tol = 1e-8;
  std::string format = "text";
  std::string measure = "egamma";
  double a = 1.0;
  double epsilon = 0.01;
  bool post_select = false;
  bool no_witness = false;

  std::string kind;
  std::string params = "{}";
  std::string channel;
  std::string channel2;
  std::string luders1;
  std::string luders2;
  std::vector<std::string> references;
  std::vector<std::string> separable_refs;
  std::vector<std::string> candidates;
  std::vector<std::string> properties;
  int trials = 100;

  OptimizerConfig config() const {
    OptimizerConfig c;
    c.seed = seed;
    c.restarts = restarts;
    c.max_iter = max_iter;
    c.tol = tol;
    return c;
  }
  bool json_mode() const { return format == "json"; }
};

std::string fixed6(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string dims_text(const FactorDims& d) {
  std::string s = "(";
  for (std::size_t k = 0; k < d.size(); ++k) s += (k ? "," : "") + std::to_string(d[k]);
  return s + ")";
}

fs::path sibling(const fs::path& p, const std::string& suffix) {
  fs::path out = p;
  out.replace_extension();
  out += suffix;
  return out;
}

// Prints the JSON record in json mode and the text lines otherwise; also
// writes the record to --output when the subcommand treats it as a report.
void emit(const Options& o, const json& record, const std::string& text, bool report_to_output = true) {
  if (o.json_mode())
    std::cout << record.dump() << "\n";
  else
    std::cout << text;
  if (report_to_output && !o.output.empty()) write_json_file(record, o.output);
}

DensityOperator load_density(const Options& o) {
  if (o.input.empty()) throw InvalidInputError("--input is required");
  return as_density(read_state(o.input));
}

json bracket_json(const GammaBracket& b) {
  return {{"lower", b.lower},
          {"upper", b.upper},
          {"verdict", to_string(b.verdict)},
          {"strategy", to_string(b.strategy)},
          {"residual", b.residual},
          {"restarts", b.restarts},
          {"iterations", b.iterations},
          {"terms", b.witness.size()}};
}

std::vector<TensorDecomposition> load_candidates(const Options& o) {
  std::vector<TensorDecomposition> out;
  for (const std::string& p : o.candidates) out.push_back(read_witness(p));
  return out;
}

int cmd_make_state(const Options& o) {
  json params = json::parse(o.params);
  if (!params.is_object()) throw InvalidInputError("--params must be a JSON object");
  if (!params.contains("seed")) params["seed"] = o.seed;
  const GeneratedState g = make_state(o.kind, params);
  const json state = state_to_json(g.state);
  json record{{"kind", o.kind}, {"dims", dims_of(g.state).values()}, {"output", nullptr}, {"witness", nullptr}};
  if (o.output.empty()) {
    std::cout << state.dump() << "\n";
    return 0;
  }
  write_json_file(state, o.output);
  record["output"] = o.output;
  if (g.witness) {
    const fs::path wp = sibling(o.output, ".witness.json");
    write_witness(*g.witness, wp);
    record["witness"] = wp.string();
  }
  std::ostringstream t;
  t << "state " << o.kind << " " << dims_text(dims_of(g.state)) << " written to " << o.output << "\n";
  if (g.witness) t << "separable witness written to " << record["witness"].get<std::string>() << "\n";
  emit(o, record, t.str(), false);
  return 0;
}

int cmd_schmidt(const Options& o) {
  if (o.input.empty()) throw InvalidInputError("--input is required");
  const AnyState s = read_state(o.input);
  std::ostringstream t;
  json record;
  if (const auto* psi = std::get_if<PureState>(&s)) {
    const SchmidtDecomposition sd = schmidt_decompose(*psi);
    std::vector<double> p(sd.coeffs.data(), sd.coeffs.data() + sd.coeffs.size());
    record = {{"kind", "pure"}, {"coefficients", p}, {"rank", p.size()}, {"gamma", sd.sum_sqrt() * sd.sum_sqrt()}};
    t << "Schmidt coefficients:";
    for (double x : p) t << " " << fixed6(x);
    t << "\nrank " << p.size() << ", gamma " << fixed6(sd.sum_sqrt() * sd.sum_sqrt()) << "\n";
  } else {
    const OperatorSchmidt os = operator_schmidt(std::get<DensityOperator>(s));
    std::vector<double> v(os.values.data(), os.values.data() + os.values.size());
    const double nuclear = os.values.sum();
    record = {{"kind", "density"}, {"coefficients", v}, {"rank", v.size()}, {"realigned_nuclear_norm", nuclear}};
    t << "operator Schmidt coefficients:";
    for (double x : v) t << " " << fixed6(x);
    t << "\nrank " << v.size() << ", realigned nuclear norm " << fixed6(nuclear) << "\n";
  }
  emit(o, record, t.str());
  return 0;
}

int cmd_gamma_bounds(const Options& o) {
  const DensityOperator rho = load_density(o);
  const std::vector<TensorDecomposition> cands = load_candidates(o);
  const GammaBracket b = gamma_bracket_any(rho, o.config(), cands);
  json record = bracket_json(b);
  record["witness_path"] = nullptr;
  if (!o.no_witness) {
    const fs::path wp = sibling(o.output.empty() ? fs::path(o.input) : fs::path(o.output), ".witness.json");
    write_witness(b.witness, wp);
    record["witness_path"] = wp.string();
  }
  std::ostringstream t;
  t << "gamma bracket [" << fixed6(b.lower) << ", " << fixed6(b.upper) << "]\n";
  t << "verdict " << to_string(b.verdict) << "\n";
  t << "witness " << b.witness.size() << " terms from " << to_string(b.strategy) << ", residual "
    << b.residual << "\n";
  if (!o.no_witness) t << "witness written to " << record["witness_path"].get<std::string>() << "\n";
  emit(o, record, t.str());
  return 0;
}

int cmd_measure(const Options& o) {
  const DensityOperator rho = load_density(o);
  std::ostringstream t;
  json record;
  if (o.measure == "svn") {
    if (rho.dims().size() != 2) throw InvalidInputError("svn needs a bipartite state");
    const EntropyReport r1 = svn_entropy(rho, 1);
    const EntropyReport r0 = svn_entropy(rho, 0);
    record = {{"measure", "svn"}, {"lower", r1.value},      {"upper", r1.value},    {"a", nullptr},
              {"gamma_lower", nullptr}, {"gamma_upper", nullptr}, {"traced_factor", 1}, {"other_side", r0.value}};
    t << "svn " << fixed6(r1.value) << " (factor 2 traced out; factor 1 traced out gives " << fixed6(r0.value)
      << ")\n";
  } else {
    const MeasureSpec spec = parse_measure(o.measure, o.a);
    const GammaBracket b = gamma_bracket_any(rho, o.config(), load_candidates(o));
    const Interval v = measure_bracket(b, spec);
    record = {{"measure", o.measure},   {"lower", v.lo},         {"upper", v.hi},           {"a", spec.a},
              {"gamma_lower", b.lower}, {"gamma_upper", b.upper}, {"traced_factor", nullptr}, {"other_side", nullptr}};
    t << o.measure << " in [" << fixed6(v.lo) << ", " << fixed6(v.hi) << "] (gamma in [" << fixed6(b.lower) << ", "
      << fixed6(b.upper) << "])\n";
  }
  emit(o, record, t.str());
  return 0;
}

KrausChannel combined_channel(const Options& o, const FactorDims& dims) {
  if (o.channel.empty()) throw InvalidInputError("--channel is required");
  const KrausChannel c1 = read_channel(o.channel);
  if (o.channel2.empty()) {
    if (c1.dim_in != dims.total()) throw InvalidInputError("channel input dim does not match the state");
    return c1;
  }
  return tensor_channel(c1, read_channel(o.channel2));
}

int cmd_apply_channel(const Options& o) {
  const DensityOperator rho = load_density(o);
  const KrausChannel c = combined_channel(o, rho.dims());
  FactorDims out_dims{c.dim_out};
  if (!o.channel2.empty()) {
    const KrausChannel c1 = read_channel(o.channel);
    out_dims = FactorDims{c1.dim_out, c.dim_out / c1.dim_out};
  } else if (c.dim_out == rho.dims().total()) {
    out_dims = rho.dims();
  }
  const CMatrix image = apply_channel(c, rho);
  const double p = image.trace().real();
  std::optional<DensityOperator> out;
  if (o.post_select) {
    out = post_select(c, rho);
    out = validate_density(out->matrix(), out_dims);
  } else if (std::abs(p - 1.0) <= 1e-9) {
    out = validate_density(image, out_dims);
  }
  json record{{"trace", p},
              {"trace_preserving", c.trace_preserving},
              {"post_selected", o.post_select},
              {"dims", out_dims.values()},
              {"output", nullptr}};
  std::ostringstream t;
  t << "output trace " << fixed6(p) << (c.trace_preserving ? " (trace preserving)" : "") << "\n";
  if (!o.output.empty()) {
    if (!out) throw InvalidInputError("output is not normalized; use --post-select to renormalize");
    write_state(*out, o.output);
    record["output"] = o.output;
    t << (o.post_select ? "post-selected state" : "state") << " written to " << o.output << "\n";
  }
  if (c.warning) t << "warning: " << *c.warning << "\n";
  emit(o, record, t.str(), false);
  return 0;
}

int cmd_luders(const Options& o) {
  const DensityOperator rho = load_density(o);
  if (o.luders1.empty() || o.luders2.empty()) throw InvalidInputError("--luders1 and --luders2 are required");
  const MeasurementOutcome m = luders_outcomes(read_luders(o.luders1), read_luders(o.luders2), rho);
  const UpperBound up = gamma_upper(rho, o.config(), load_candidates(o));
  json branches = json::array();
  double average = 0.0;
  std::ostringstream t;
  for (const Branch& b : m.branches) {
    const double g = gamma_lower(b.state);
    average += b.probability * (g - 1.0);
    branches.push_back({{"i", b.i}, {"j", b.j}, {"probability", b.probability}, {"gamma_lower", g}});
    t << "branch (" << b.i << "," << b.j << ") p " << fixed6(b.probability) << " gamma >= " << fixed6(g) << "\n";
  }
  const double bound = up.cost - 1.0;
  const json record{{"branches", branches},
                    {"total_probability", m.total_probability},
                    {"average_excess_lower", average},
                    {"excess_upper", bound},
                    {"holds", average <= bound + 1e-8}};
  t << "sum p (gamma_lower - 1) = " << fixed6(average) << " <= gamma_upper - 1 = " << fixed6(bound)
    << (average <= bound + 1e-8 ? "" : "  VIOLATED") << "\n";
  emit(o, record, t.str());
  return 0;
}

int cmd_rel_entropy(const Options& o) {
  const DensityOperator sigma = load_density(o);
  if (o.references.empty() && o.separable_refs.empty())
    throw InvalidInputError("at least one --reference or --separable-reference is required");
  std::vector<SeparableState> certified;
  json refs = json::array();
  std::ostringstream t;
  auto report = [&](const std::string& path, const DensityOperator& rho, bool separable) {
    const double value = relative_entropy(sigma, rho);
    refs.push_back({{"path", path}, {"value", finite_or_null(value)}, {"separable_witness", separable}});
    t << path << ": " << fixed6(value) << (separable ? " (separable witness)" : "") << "\n";
  };
  for (const std::string& path : o.references) report(path, as_density(read_state(path)), false);
  for (const std::string& path : o.separable_refs) {
    const DensityOperator rho = as_density(read_state(path));
    certified.push_back(make_separable(rho, read_witness(sibling(path, ".witness.json"))));
    report(path, rho, true);
  }
  json record{{"references", refs}, {"upper_bound", nullptr}};
  if (!certified.empty()) {
    const double ub = relative_entropy_upper(sigma, certified);
    record["upper_bound"] = finite_or_null(ub);
    t << "relative entropy of entanglement <= " << fixed6(ub) << "\n";
  } else {
    t << "no separable reference given; no bound certified\n";
  }
  emit(o, record, t.str());
  return 0;
}

int cmd_verify(const Options& o) {
  const std::vector<PropertyReport> reports = run_suite(o.properties, o.trials, o.seed, o.config());
  bool ok = true;
  for (const PropertyReport& r : reports) {
    ok = ok && r.passed();
    if (o.json_mode()) {
      std::cout << report_to_json(r).dump() << "\n";
    } else {
      std::cout << (r.passed() ? "PASS " : "FAIL ") << r.id << " trials " << r.trials << " failures " << r.failures
                << " worst margin " << r.worst_margin << "\n";
    }
  }
  if (!o.output.empty()) {
    std::ofstream f(o.output);
    for (const PropertyReport& r : reports) f << report_to_json(r).dump() << "\n";
  }
  return ok ? 0 : 2;
}

CMatrix basis_projector(int i) {
  CMatrix p = CMatrix::Zero(3, 3);
  p(i, i) = 1.0;
  return p;
}

// w|00><00| + ((1-w)/2)(|12><12| + |21><21|) with its product witness.
SeparableState block_candidate(double w) {
  const TensorDecomposition d({3, 3}, {TensorTerm{{w * basis_projector(0), basis_projector(0)}},
                                       TensorTerm{{0.5 * (1.0 - w) * basis_projector(1), basis_projector(2)}},
                                       TensorTerm{{0.5 * (1.0 - w) * basis_projector(2), basis_projector(1)}}});
  return make_separable(validate_density(d.reconstruct(), {3, 3}), d);
}

int cmd_demo_example8(const Options& o) {
  const double eps = o.epsilon;
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidInputError("--epsilon must lie in (0, 1)");
  const OptimizerConfig cfg = o.config();
  const DensityOperator rho = make_rho_eps(eps);

  // Convexity certificate: mix the witnesses of the two orthogonal blocks.
  CVector anti = CVector::Zero(9);
  anti(1 * 3 + 2) = 1.0 / std::sqrt(2.0);
  anti(2 * 3 + 1) = -1.0 / std::sqrt(2.0);
  const DensityOperator anti_state = PureState({3, 3}, anti).density();
  const GammaBracket anti_b = gamma_bracket(anti_state, cfg);
  const TensorDecomposition corner({3, 3}, {TensorTerm{{basis_projector(0), basis_projector(0)}}});
  const std::vector<TensorDecomposition> cands{mix_decompositions(corner, anti_b.witness, 1.0 - eps)};
  const GammaBracket b = gamma_bracket(rho, cfg, cands);

  const std::vector<SeparableState> rho_cands{block_candidate(1.0 - eps)};
  const double es_bound = relative_entropy_upper(rho, rho_cands);

  // Local projection onto span{|1>, |2>} on both sides, then renormalize.
  const CMatrix p12 = basis_projector(1) + basis_projector(2);
  const KrausChannel select = validate_channel({kron(p12, p12)});
  const DensityOperator selected = validate_density(post_select(select, rho).matrix(), {3, 3});
  const GammaBracket sb = gamma_bracket(selected, cfg);
  const double probability = apply_channel(select, rho).trace().real();
  const std::vector<SeparableState> sel_cands{block_candidate(0.0)};
  const double es_selected = relative_entropy_upper(selected, sel_cands);

  const MeasureSpec eg{MeasureKind::EGamma, 1.0};
  const Interval before = measure_bracket(b, eg);
  const Interval after = measure_bracket(sb, eg);
  const json record{{"epsilon", eps},
                    {"gamma_lower", b.lower},
                    {"gamma_upper", b.upper},
                    {"relative_entropy_bound", es_bound},
                    {"epsilon_ln2", eps * std::log(2.0)},
                    {"selection_probability", probability},
                    {"selected_gamma_lower", sb.lower},
                    {"selected_gamma_upper", sb.upper},
                    {"selected_relative_entropy_bound", es_selected},
                    {"egamma_before_upper", before.hi},
                    {"egamma_after_lower", after.lo},
                    {"increase", after.lo > before.hi}};
  std::ostringstream t;
  t << "rho_eps with eps = " << fixed6(eps) << "\n";
  t << "gamma bracket [" << fixed6(b.lower) << ", " << fixed6(b.upper) << "], 1 + eps = " << fixed6(1.0 + eps)
    << "\n";
  t << "relative entropy bound " << fixed6(es_bound) << " (eps ln 2 = " << fixed6(eps * std::log(2.0)) << ")\n";
  t << "post-selection keeps the antisymmetric branch with probability " << fixed6(probability) << "\n";
  t << "post-selected gamma bracket [" << fixed6(sb.lower) << ", " << fixed6(sb.upper)
    << "], relative entropy bound " << fixed6(es_selected) << "\n";
  t << "E_gamma before <= " << fixed6(before.hi) << ", after >= " << fixed6(after.lo)
    << (after.lo > before.hi ? ": entanglement increased under post-selection" : "") << "\n";
  emit(o, record, t.str());
  return 0;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--input", o.input, "input state file");
  sub->add_option("--output", o.output, "output file");
  sub->add_option("--seed", o.seed, "master seed");
  sub->add_option("--restarts", o.restarts, "local search restarts")->check(CLI::NonNegativeNumber);
  sub->add_option("--max-iter", o.max_iter, "pair moves of the local search")->check(CLI::PositiveNumber);
  sub->add_option("--tol", o.tol, "relative convergence tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified greatest cross norm brackets and entanglement measures"};
  app.require_subcommand(1);
  Options o;

  auto* make = app.add_subcommand("make-state", "generate a state file");
  add_common(make, o);
  make->add_option("--kind", o.kind, "bell, ghz, two-term, rho-eps, product, coeff, random-coeff, random-pure, "
                                     "random-density, random-separable, mixture")
      ->required();
  make->add_option("--params", o.params, "generator parameters as a JSON object");

  auto* schmidt = app.add_subcommand("schmidt", "Schmidt or operator Schmidt coefficients");
  add_common(schmidt, o);

  auto* bounds = app.add_subcommand("gamma-bounds", "certified bracket of the greatest cross norm");
  add_common(bounds, o);
  bounds->add_flag("--no-witness", o.no_witness, "do not write the witness file");
  bounds->add_option("--candidate", o.candidates, "extra witness file offered to the minimizer");

  auto* measure = app.add_subcommand("measure", "entanglement measure over the bracket");
  add_common(measure, o);
  measure->add_option("--measure", o.measure, "egamma, f1, f2, f3 or svn")
      ->check(CLI::IsMember({"egamma", "f1", "f2", "f3", "svn"}));
  measure->add_option("--a", o.a, "parameter of f3");
  measure->add_option("--candidate", o.candidates, "extra witness file offered to the minimizer");

  auto* apply = app.add_subcommand("apply-channel", "apply a channel or a local pair of channels");
  add_common(apply, o);
  apply->add_option("--channel", o.channel, "channel file (first factor when --channel2 is given)");
  apply->add_option("--channel2", o.channel2, "channel file for the second factor");
  apply->add_flag("--post-select", o.post_select, "renormalize the output");

  auto* luders = app.add_subcommand("luders", "local Luders measurement branches");
  add_common(luders, o);
  luders->add_option("--luders1", o.luders1, "projector file for factor 1");
  luders->add_option("--luders2", o.luders2, "projector file for factor 2");
  luders->add_option("--candidate", o.candidates, "extra witness file offered to the minimizer");

  auto* rel = app.add_subcommand("rel-entropy", "relative entropy against reference states");
  add_common(rel, o);
  rel->add_option("--reference", o.references, "reference state file");
  rel->add_option("--separable-reference", o.separable_refs,
                  "separable reference state file; its witness is read from NAME.witness.json");

  auto* verify = app.add_subcommand("verify", "run the property suite");
  add_common(verify, o);
  verify->add_option("--trials", o.trials, "trials per property")->check(CLI::PositiveNumber);
  verify->add_option("--property", o.properties, "property id (default: all)");

  auto* demo = app.add_subcommand("demo-example8", "post-selection can increase entanglement");
  add_common(demo, o);
  demo->add_option("--epsilon", o.epsilon, "weight of the antisymmetric part");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (make->parsed()) return cmd_make_state(o);
    if (schmidt->parsed()) return cmd_schmidt(o);
    if (bounds->parsed()) return cmd_gamma_bounds(o);
    if (measure->parsed()) return cmd_measure(o);
    if (apply->parsed()) return cmd_apply_channel(o);
    if (luders->parsed()) return cmd_luders(o);
    if (rel->parsed()) return cmd_rel_entropy(o);
    if (verify->parsed()) return cmd_verify(o);
    if (demo->parsed()) return cmd_demo_example8(o);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
