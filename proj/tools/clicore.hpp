#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "jonq/fibretree.hpp"
#include "jonq/scalar.hpp"

/* Command implementations behind the command line driver, separated from
   flag parsing so the test suite can run them against string streams. */

namespace jonq::cli {

constexpr int exit_ok = 0;
constexpr int exit_bad_input = 1;
constexpr int exit_inconclusive = 2;
constexpr int exit_internal = 3;

/* Coefficient field selector: the rationals, a prime field, or a real
   quadratic extension of the rationals. */
struct FieldDesc {
  enum Kind { Q, Fp, QuadExt };
  Kind kind = Q;
  long param = 0;

  static FieldDesc parse_flag(const std::string& s);
  static FieldDesc from_json(const nlohmann::json& j);
  std::string str() const;
};

/* One job: a field, named generators, and the command parameters.  The
   lattice block is kept verbatim for the halphen command. */
struct JobConfig {
  FieldDesc field;
  std::vector<std::pair<std::string, std::string>> generators;
  int horizon = 64;
  int nmax = 8;
  nlohmann::json lattice;

  static JobConfig from_json(const nlohmann::json& j);
  static JobConfig load(const std::string& path);
};

int run_compose(const FieldDesc& field, const std::vector<std::string>& maps,
                std::ostream& out);
int run_deg(const FieldDesc& field, const std::string& map, std::ostream& out);
int run_powers(const FieldDesc& field, const std::string& map, int nmax,
               std::ostream& out);
int run_ball(const JobConfig& cfg, std::ostream& out);
int run_growth(const JobConfig& cfg, std::ostream& out);
int run_classify(const FieldDesc& field, const std::string& map, int nmax,
                 std::ostream& out);
int run_fixpoint(const JobConfig& cfg, std::ostream& out);
int run_halphen(const JobConfig& cfg, std::ostream& out);

/* Inverses of the report printers, so printed output re-parses to the
   canonical objects it came from. */
RatFunc<Rat> parse_ratfunc_x(const std::string& s);
Place<Rat> parse_place(const std::string& s);
JVertex<Rat> parse_jvertex(const std::string& s);

}  // namespace jonq::cli
