#pragma once

// Instance documents (JSON and CSV rows) and JSON reports. Integers beyond
// 2^53 are written as decimal strings; both forms are accepted on input.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "almostuniv/core_lattice.hpp"
#include "almostuniv/engine.hpp"
#include "almostuniv/oracle.hpp"

namespace almostuniv {

using Json = nlohmann::ordered_json;

struct InstanceDocument {
  std::array<std::int64_t, 6> gram;  // g11, g12, g13, g22, g23, g33
  IntVec3 numerators;
  std::int64_t denominator;
  std::string label;

  /// Throws InvalidArgument / NotPositiveDefinite for invalid data.
  Coset coset() const;
};

/// Throws ParseError naming the offending field.
InstanceDocument parse_instance(const Json& j);
InstanceDocument parse_instance_text(std::string_view text);
Json to_json(const InstanceDocument& doc);

/// One CSV row g11,g12,g13,g22,g23,g33,n1,n2,n3,den[,label]. Returns nullopt
/// for blank lines, comments and a header row. Throws ParseError naming the
/// line and field.
std::optional<InstanceDocument> parse_csv_row(std::string_view line, std::size_t line_number);

/// Exact integer as a JSON number when |v| <= 2^53, else as a string.
Json json_integer(const BigInt& v);

Json to_json(const LocalReport& report);
Json to_json(const ExceptionFamily& family, std::size_t prime_count);

/// Report with keys decision, branch, p, alpha, epsilon, dN, rad, rad_prime,
/// trace, locals and, for a failing radical, exceptions. The instance is
/// embedded so that the report can be replayed.
Json report(const InstanceDocument& doc, const Analysis& analysis, std::size_t prime_count = 5);

Json to_json(const RepresentedSet& set, const Progression& prog, bool list_gaps);

}  // namespace almostuniv
