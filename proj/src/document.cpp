#include "almostuniv/document.hpp"

#include <charconv>
#include <vector>

namespace almostuniv {

namespace {

constexpr std::int64_t kExactDoubleLimit = std::int64_t{1} << 53;

std::int64_t parse_integer_text(std::string_view text, const std::string& field) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec == std::errc::result_out_of_range) throw Error(ErrorCode::ParseError, field + ": integer out of 64-bit range");
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw Error(ErrorCode::ParseError, field + ": expected an integer, got '" + std::string(text) + "'");
  return value;
}

std::int64_t integer_field(const Json& j, const std::string& field) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
      throw Error(ErrorCode::ParseError, field + ": integer out of 64-bit range");
    return j.get<std::int64_t>();
  }
  if (j.is_string()) return parse_integer_text(j.get<std::string>(), field);
  throw Error(ErrorCode::ParseError, field + ": expected an integer");
}

const Json& member(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::ParseError, path + key + ": missing");
  return j.at(key);
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

constexpr std::array<const char*, 10> kCsvFields{"g11", "g12", "g13", "g22", "g23", "g33", "n1", "n2", "n3", "den"};

}  // namespace

Coset InstanceDocument::coset() const {
  return Coset{GramMatrix3::from_upper(gram), ShiftVector(numerators, denominator)};
}

InstanceDocument parse_instance(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "instance: expected an object");
  InstanceDocument doc{};
  const Json& gram = member(j, "gram", "");
  if (!gram.is_array() || gram.size() != 6)
    throw Error(ErrorCode::ParseError, "gram: expected six integers g11, g12, g13, g22, g23, g33");
  for (std::size_t i = 0; i < 6; ++i) doc.gram[i] = integer_field(gram[i], "gram[" + std::to_string(i) + "]");
  const Json& shift = member(j, "shift", "");
  const Json& nums = member(shift, "numerators", "shift.");
  if (!nums.is_array() || nums.size() != 3) throw Error(ErrorCode::ParseError, "shift.numerators: expected three integers");
  for (std::size_t i = 0; i < 3; ++i)
    doc.numerators[i] = integer_field(nums[i], "shift.numerators[" + std::to_string(i) + "]");
  doc.denominator = integer_field(member(shift, "denominator", "shift."), "shift.denominator");
  if (doc.denominator <= 0) throw Error(ErrorCode::ParseError, "shift.denominator: must be positive");
  if (j.contains("label")) {
    if (!j.at("label").is_string()) throw Error(ErrorCode::ParseError, "label: expected a string");
    doc.label = j.at("label").get<std::string>();
  }
  return doc;
}

InstanceDocument parse_instance_text(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed JSON: ") + e.what());
  }
  return parse_instance(j);
}

Json to_json(const InstanceDocument& doc) {
  Json j;
  j["gram"] = Json::array();
  for (auto g : doc.gram) j["gram"].push_back(json_integer(g));
  j["shift"]["numerators"] = Json::array();
  for (auto n : doc.numerators) j["shift"]["numerators"].push_back(json_integer(n));
  j["shift"]["denominator"] = json_integer(doc.denominator);
  if (!doc.label.empty()) j["label"] = doc.label;
  return j;
}

std::optional<InstanceDocument> parse_csv_row(std::string_view line, std::size_t line_number) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.remove_suffix(1);
  if (line.find_first_not_of(" \t") == std::string_view::npos) return std::nullopt;
  if (line.front() == '#') return std::nullopt;
  auto fields = split_csv(line);
  const std::string where = "line " + std::to_string(line_number);
  if (fields.size() >= 1 && fields[0].find("g11") != std::string_view::npos) return std::nullopt;
  if (fields.size() != 10 && fields.size() != 11)
    throw Error(ErrorCode::ParseError, where + ": expected 10 or 11 fields, got " + std::to_string(fields.size()));
  InstanceDocument doc{};
  std::array<std::int64_t, 10> v{};
  for (std::size_t i = 0; i < 10; ++i) v[i] = parse_integer_text(fields[i], where + ", field " + kCsvFields[i]);
  for (int i = 0; i < 6; ++i) doc.gram[i] = v[i];
  doc.numerators = {v[6], v[7], v[8]};
  doc.denominator = v[9];
  if (doc.denominator <= 0) throw Error(ErrorCode::ParseError, where + ", field den: must be positive");
  if (fields.size() == 11) doc.label = std::string(fields[10]);
  return doc;
}

Json json_integer(const BigInt& v) {
  if (abs(v) <= kExactDoubleLimit) return Json(v.convert_to<std::int64_t>());
  return Json(v.str());
}

Json to_json(const LocalReport& r) {
  Json j;
  j["q"] = r.prime;
  j["universal"] = r.universal;
  j["missed_class"] = r.missed_class ? Json(r.missed_class->representative) : Json(nullptr);
  j["precision"] = r.precision_used;
  j["method"] = std::string(local_method_name(r.method));
  return j;
}

Json to_json(const ExceptionFamily& family, std::size_t prime_count) {
  Json j;
  j["t"] = family.t;
  j["mu"] = family.mu;
  j["rho"] = family.rho;
  j["modulus"] = family.modulus;
  j["split_condition"] = "-p is a square mod q";
  j["primes"] = exception_primes(family, prime_count);
  Json values = Json::array();
  for (auto v : predict_exceptions(family, prime_count)) values.push_back(json_integer(BigInt(v)));
  j["values"] = values;
  return j;
}

Json report(const InstanceDocument& doc, const Analysis& analysis, std::size_t prime_count) {
  const Verdict& v = analysis.verdict;
  Json j;
  j["decision"] = std::string(decision_name(v.decision));
  j["branch"] = std::string(branch_name(v.branch));
  if (const auto* inst = std::get_if<Instance>(&analysis.validation)) {
    const BigInt& dN = inst->gram().determinant();
    j["p"] = inst->p;
    j["alpha"] = inst->alpha;
    j["epsilon"] = json_integer(inst->epsilon);
    j["dN"] = json_integer(dN);
    j["rad"] = radical(to_uint64(dN));
    j["rad_prime"] = radical_prime_part(*inst);
    j["scale_applied"] = inst->scale_applied;
  } else {
    const auto& rej = std::get<Rejection>(analysis.validation);
    const Coset coset = doc.coset();
    const BigInt& dN = coset.gram.determinant();
    j["p"] = rej.prime ? Json(*rej.prime) : Json(nullptr);
    j["alpha"] = nullptr;
    BigRational eps = coset.shift_value();
    j["epsilon"] = denominator(eps) == 1 ? json_integer(numerator(eps)) : Json(nullptr);
    j["dN"] = json_integer(dN);
    j["rad"] = radical(to_uint64(dN));
    j["rad_prime"] = rej.prime ? Json(radical_nonp(to_uint64(dN), *rej.prime)) : Json(nullptr);
    j["gate"] = {{"rejection", std::string(rejection_name(rej.kind))}, {"message", rej.message}};
    if (rej.norm_ideal) j["gate"]["norm_ideal"] = json_integer(*rej.norm_ideal);
    if (analysis.service_not_almost_universal)
      j["service_not_almost_universal"] = *analysis.service_not_almost_universal;
  }
  Json trace = Json::array();
  for (const auto& t : v.trace) trace.push_back({{"condition", t.condition}, {"holds", t.holds}, {"detail", t.detail}});
  j["trace"] = trace;
  Json locals = Json::array();
  for (const auto& r : v.locals) locals.push_back(to_json(r));
  j["locals"] = locals;
  if (v.failed_prime) j["failed_prime"] = *v.failed_prime;
  if (v.witness) j["witness"] = *v.witness;
  if (v.exceptional_family) j["exceptions"] = to_json(*v.exceptional_family, prime_count);
  j["instance"] = to_json(doc);
  return j;
}

Json to_json(const RepresentedSet& set, const Progression& prog, bool list_gaps) {
  Json j;
  j["bound"] = set.bound();
  j["fingerprint"] = set.fingerprint();
  j["authoritative"] = set.authoritative;
  j["epsilon"] = json_integer(prog.epsilon);
  j["modulus"] = prog.modulus;
  j["represented_count"] = set.count();
  j["visited"] = set.stats.visited;
  if (list_gaps && set.authoritative) {
    auto g = gaps(set, prog);
    Json n = Json::array(), values = Json::array();
    for (auto k : g) {
      n.push_back(k);
      values.push_back(json_integer(prog.epsilon + BigInt(prog.modulus) * k));
    }
    j["gaps"] = n;
    j["gap_values"] = values;
  } else if (!list_gaps) {
    j["values"] = set.values();
  }
  return j;
}

}  // namespace almostuniv
