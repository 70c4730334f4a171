#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "stir/partition.hpp"
#include "stir/rational.hpp"
#include "stir/torus.hpp"
#include "stir/union_jack.hpp"

namespace stir {

// One row of the closed-form versus enumeration table.
struct OracleCase {
  std::string description;
  Rational closed_form;
  Rational oracle;

  bool equal() const { return closed_form == oracle; }
};

struct OracleSummary {
  std::vector<OracleCase> cases;
  std::int64_t mismatches = 0;
  // Union Jack classes seen per overlap (0, 1, 2) among nonzero-weight psi-psi cases.
  std::vector<std::vector<UnionJackClass>> realized_classes = std::vector<std::vector<UnionJackClass>>(3);
};

// Vertex pairs of {0..n-1} used per overlap class; several per class so that
// exchangeability over labels is exercised rather than assumed.
std::vector<std::pair<Edge, Edge>> oracle_edge_pairs(int n, int overlap);

// E[phi|xi] and E[psi|xi] against enumeration for every cycle type of n.
OracleSummary verify_first_moments(int n, bool keep_cases = false);
// E[phi phi|xi] and E[psi psi|xi] for every overlap, type, index and cut pair.
OracleSummary verify_second_moments(int n, bool keep_cases = false);

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  bool skipped = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20240601;
  bool quick = false;      // exact checks only
  std::ostream* log = nullptr;  // one line per criterion as it finishes
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);
std::string format_result(const CriterionResult& r);

}  // namespace stir
