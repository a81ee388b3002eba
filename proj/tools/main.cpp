// almostuniv: decide almost universality of ternary inhomogeneous quadratic
// polynomials and cross-check verdicts with exact enumeration.
//
// Exit codes: 0 ran, 2 input error, 3 internal assertion or inconsistency.

#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "almostuniv/document.hpp"

using namespace almostuniv;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitInconsistent = 3;

struct Source {
  std::string path;
  std::string gram;
  std::string shift;
  std::string label;
};

std::string read_all(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Inline form: --gram g11,g12,g13,g22,g23,g33 --shift n1,n2,n3/den
InstanceDocument load(const Source& src) {
  if (!src.gram.empty() || !src.shift.empty()) {
    if (src.gram.empty() || src.shift.empty())
      throw Error(ErrorCode::ParseError, "--gram and --shift must be given together");
    auto slash = src.shift.find('/');
    std::string nums = src.shift.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : src.shift.substr(slash + 1);
    auto row = src.gram + "," + nums + "," + den;
    auto doc = parse_csv_row(row, 1);
    if (!doc) throw Error(ErrorCode::ParseError, "empty inline instance");
    doc->label = src.label;
    return *doc;
  }
  if (src.path.empty()) throw Error(ErrorCode::ParseError, "no instance given (path, '-' or --gram/--shift)");
  return parse_instance_text(read_all(src.path));
}

void add_source(CLI::App* cmd, Source& src) {
  cmd->add_option("instance", src.path, "Instance JSON document ('-' for stdin)");
  cmd->add_option("--gram", src.gram, "Inline Gram upper triangle g11,g12,g13,g22,g23,g33");
  cmd->add_option("--shift", src.shift, "Inline shift n1,n2,n3/den");
  cmd->add_option("--label", src.label, "Label for an inline instance");
}

std::string format_vec(const IntVec3& x) {
  return "(" + std::to_string(x[0]) + "," + std::to_string(x[1]) + "," + std::to_string(x[2]) + ")";
}

void print_report_text(const Json& r) {
  std::cout << "decision: " << r["decision"].get<std::string>() << "\n";
  std::cout << "branch:   " << r["branch"].get<std::string>() << "\n";
  std::cout << "p = " << r["p"].dump() << ", alpha = " << r["alpha"].dump() << ", epsilon = " << r["epsilon"].dump()
            << ", dN = " << r["dN"].dump() << ", rad(dN)' = " << r["rad_prime"].dump() << "\n";
  if (r.contains("gate")) std::cout << "gate: " << r["gate"]["message"].get<std::string>() << "\n";
  for (const auto& t : r["trace"])
    std::cout << "  [" << t["condition"].get<std::string>() << "] " << (t["holds"].get<bool>() ? "holds" : "fails")
              << ": " << t["detail"].get<std::string>() << "\n";
  for (const auto& l : r["locals"]) {
    std::cout << "  q = " << l["q"].dump() << ": " << (l["universal"].get<bool>() ? "universal" : "not universal");
    if (!l["missed_class"].is_null()) std::cout << " (misses class " << l["missed_class"].dump() << ")";
    std::cout << " via " << l["method"].get<std::string>() << "\n";
  }
  if (r.contains("service_not_almost_universal") && r["service_not_almost_universal"].get<bool>())
    std::cout << "service mode: not almost universal (local failure)\n";
  if (r.contains("witness")) std::cout << "witness: " << r["witness"].dump() << "\n";
  if (r.contains("exceptions")) {
    const auto& e = r["exceptions"];
    std::cout << "exceptions: t = " << e["t"].dump() << ", mu = " << e["mu"].dump() << ", rho = " << e["rho"].dump()
              << ", primes " << e["primes"].dump() << ", values " << e["values"].dump() << "\n";
  }
}

// Oracle agreement for one analyzed row.
struct Agreement {
  std::string status;  // consistent, inconsistent, skipped
  std::string detail;
};

Agreement check_agreement(const Coset& coset, const Analysis& a, std::uint64_t bound_override, std::uint64_t budget) {
  const Verdict& v = a.verdict;
  const Instance* inst = std::get_if<Instance>(&a.validation);
  const bool use_instance = inst != nullptr;
  std::vector<std::uint64_t> predicted;
  if (v.exceptional_family) predicted = predict_exceptions(*v.exceptional_family, 3);
  std::uint64_t bound = bound_override;
  if (bound == 0) {
    bound = 100'000;
    if (!predicted.empty() && predicted.front() <= kMaxOracleBound / 2) bound = std::max(bound, 2 * predicted.front());
  }
  bool expect_stable;
  if (v.decision == Decision::AlmostUniversal) {
    expect_stable = true;
  } else if (v.branch == Branch::RadicalFails) {
    expect_stable = false;
  } else if (v.branch == Branch::LocalFailure || (a.service_not_almost_universal && *a.service_not_almost_universal)) {
    expect_stable = false;
  } else {
    return {"skipped", "no oracle expectation for branch " + std::string(branch_name(v.branch))};
  }
  RepresentedSet set = use_instance ? enumerate(*inst, bound, {budget, 1}) : enumerate(coset, bound, {budget, 1});
  if (!set.authoritative) return {"skipped", "enumeration budget exceeded"};
  Progression prog = use_instance ? progression(*inst) : progression(coset);
  if (v.branch == Branch::RadicalFails) {
    for (auto value : predicted) {
      if (value > bound) continue;
      if (set.contains(value))
        return {"inconsistent", "predicted exception " + std::to_string(value) + " is represented"};
    }
  }
  Stability s = stabilization(set, prog, 0.5);
  if (expect_stable && s != Stability::Stable) return {"inconsistent", "gaps remain in [B/2, B]"};
  if (!expect_stable && v.branch != Branch::RadicalFails && s == Stability::Stable)
    return {"inconsistent", "local failure predicts gaps in [B/2, B] but none found"};
  return {"consistent", "B = " + std::to_string(bound)};
}

std::string csv_escape(std::string s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

int run_batch(const std::string& path, std::uint64_t bound, unsigned jobs, std::uint64_t budget) {
  std::istringstream in(read_all(path));
  struct Row {
    std::size_t line;
    std::string raw;
    std::string output;
    bool inconsistent = false;
  };
  std::vector<Row> rows;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) rows.push_back({n, line, {}, false});

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      Row& row = rows[i];
      std::string label = "line" + std::to_string(row.line);
      try {
        auto doc = parse_csv_row(row.raw, row.line);
        if (!doc) continue;
        if (!doc->label.empty()) label = doc->label;
        Coset coset = doc->coset();
        Analysis a = analyze(coset);
        Agreement ag = check_agreement(coset, a, bound, budget);
        row.inconsistent = ag.status == "inconsistent";
        row.output = csv_escape(label) + "," + std::string(decision_name(a.verdict.decision)) + "," +
                     std::string(branch_name(a.verdict.branch)) + "," + ag.status + "," + csv_escape(ag.detail);
      } catch (const Error& e) {
        row.inconsistent = e.code() == ErrorCode::InternalAssertion;
        row.output = csv_escape(label) + ",error,," + (row.inconsistent ? "inconsistent" : "skipped") + "," +
                     csv_escape("line " + std::to_string(row.line) + ": " + e.what());
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::max(1u, jobs); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  bool any_inconsistent = false;
  bool header = false;
  for (const auto& row : rows) {
    if (row.output.empty()) continue;
    if (!header) {
      std::cout << "label,decision,branch,agreement,detail\n";
      header = true;
    }
    std::cout << row.output << "\n";
    any_inconsistent = any_inconsistent || row.inconsistent;
  }
  return any_inconsistent ? kExitInconsistent : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Almost universality of ternary inhomogeneous quadratic polynomials"};
  app.require_subcommand(1);
  bool json = false;
  unsigned jobs = 1;
  std::uint64_t budget = 0;
  app.add_flag("--json", json, "Machine-readable output");
  app.add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1u, 256u));
  app.add_option("--budget", budget, "Enumeration budget in lattice points (0 = unlimited)");

  Source src;
  auto* analyze_cmd = app.add_subcommand("analyze", "Decide almost universality");
  add_source(analyze_cmd, src);
  std::size_t prime_count = 5;
  analyze_cmd->add_option("--primes", prime_count, "Number of exceptional primes to list");

  auto* scan_cmd = app.add_subcommand("local-scan", "Local universality at 2 and the primes dividing dN");
  add_source(scan_cmd, src);

  auto* enum_cmd = app.add_subcommand("enumerate", "Exact represented set of the coset");
  add_source(enum_cmd, src);
  std::uint64_t bound = 0;
  bool show_gaps = false;
  std::optional<std::uint64_t> witness_value;
  enum_cmd->add_option("--bound", bound, "Largest value enumerated");
  enum_cmd->add_flag("--gaps", show_gaps, "List missed progression values instead of the represented set");
  enum_cmd->add_option("--witness", witness_value, "Print x with Q(nu + x) = v");

  auto* exc_cmd = app.add_subcommand("exceptions", "Predicted unrepresented values for a failing radical");
  add_source(exc_cmd, src);
  std::size_t count = 10;
  exc_cmd->add_option("--count", count, "Number of values");

  auto* batch_cmd = app.add_subcommand("batch", "Analyze a CSV corpus and cross-check with the oracle");
  std::string csv_path;
  std::uint64_t batch_bound = 0;
  batch_cmd->add_option("csv", csv_path, "CSV g11,g12,g13,g22,g23,g33,n1,n2,n3,den[,label]")->required();
  batch_cmd->add_option("--bound", batch_bound, "Oracle bound (default max(1e5, 2 x first predicted exception))");

  for (auto* cmd : {analyze_cmd, scan_cmd, enum_cmd, exc_cmd, batch_cmd}) {
    cmd->add_flag("--json", json, "Machine-readable output");
    cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1u, 256u));
    cmd->add_option("--budget", budget, "Enumeration budget in lattice points (0 = unlimited)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*batch_cmd) return run_batch(csv_path, batch_bound, jobs, budget);

    InstanceDocument doc = load(src);
    Coset coset = doc.coset();

    if (*analyze_cmd) {
      Json r = report(doc, analyze(coset), prime_count);
      if (json)
        std::cout << r.dump(2) << "\n";
      else
        print_report_text(r);
      return 0;
    }

    if (*scan_cmd) {
      Json out = Json::array();
      for (const auto& r : local_scan(coset.gram, 0)) out.push_back(to_json(r));
      if (json) {
        std::cout << out.dump(2) << "\n";
      } else {
        for (const auto& l : out)
          std::cout << "q = " << l["q"].dump() << ": " << (l["universal"].get<bool>() ? "universal" : "not universal")
                    << (l["missed_class"].is_null() ? "" : " (misses class " + l["missed_class"].dump() + ")")
                    << " via " << l["method"].get<std::string>() << ", precision " << l["precision"].dump() << "\n";
      }
      return 0;
    }

    if (*enum_cmd) {
      if (witness_value) {
        auto x = find_witness(coset, *witness_value, budget);
        if (json) {
          Json j;
          j["value"] = *witness_value;
          j["witness"] = x ? Json(*x) : Json(nullptr);
          std::cout << j.dump(2) << "\n";
        } else {
          std::cout << (x ? "x = " + format_vec(*x) : "no x with Q(nu + x) = " + std::to_string(*witness_value)) << "\n";
        }
        if (bound == 0) return 0;
      }
      if (bound == 0) throw Error(ErrorCode::InvalidArgument, "enumerate needs --bound or --witness");
      Progression prog = progression(coset);
      if (prog.epsilon > bound) std::cerr << "warning: bound is below Q(nu); the progression window is empty\n";
      RepresentedSet set = enumerate(coset, bound, {budget, jobs});
      if (!set.authoritative) std::cerr << "warning: budget exceeded; the represented set is partial\n";
      Json j = to_json(set, prog, show_gaps);
      if (json) {
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "bound " << bound << ", epsilon " << prog.epsilon << ", modulus " << prog.modulus << ", "
                  << set.count() << " values, " << set.stats.visited << " points\n";
        const auto& list = show_gaps ? j.value("gap_values", Json::array()) : j["values"];
        std::cout << (show_gaps ? "gaps: " : "values: ") << list.dump() << "\n";
      }
      return 0;
    }

    if (*exc_cmd) {
      Analysis a = analyze(coset);
      if (!a.verdict.exceptional_family) {
        std::cerr << "no exceptional family: branch " << branch_name(a.verdict.branch) << "\n";
        if (json) std::cout << Json::object().dump() << "\n";
        return 0;
      }
      Json j = to_json(*a.verdict.exceptional_family, count);
      if (json)
        std::cout << j.dump(2) << "\n";
      else
        std::cout << "t = " << j["t"].dump() << ", mu = " << j["mu"].dump() << ", rho = " << j["rho"].dump()
                  << ", modulus = " << j["modulus"].dump() << "\nprimes: " << j["primes"].dump()
                  << "\nvalues: " << j["values"].dump() << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error (" << error_code_name(e.code()) << "): " << e.what() << "\n";
    return e.code() == ErrorCode::InternalAssertion ? kExitInconsistent : kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInconsistent;
  }
  return 0;
}
