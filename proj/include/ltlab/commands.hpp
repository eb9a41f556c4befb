#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ltlab::cli {

enum ExitCode : int {
  kOk = 0,
  kAcceptanceFailure = 1,
  kConfigError = 2,
  kResourceError = 3,
  kDegeneracy = 4,
};

struct GlobalOptions {
  std::optional<std::string> config;
  std::string out_dir;  // empty: tables and reports go to the output stream
  int jobs = 1;
  std::uint64_t seed = 0;
  bool strict = false;
};

/// Runs `body`, mapping library exceptions to exit codes and printing the
/// message to `err`.
int guarded(const std::function<int()>& body, std::ostream& err);

int cmd_constants(const GlobalOptions& g, int d_min, int d_max, int q_min, int q_max, double mu,
                  std::ostream& out);
int cmd_response(const GlobalOptions& g, const std::string& function, int d, const std::vector<double>& ks,
                 double mu, std::ostream& out);
int cmd_rumin(const GlobalOptions& g, int d, int grid_points, std::ostream& out);
int cmd_box_run(const GlobalOptions& g, std::ostream& out);
int cmd_sweep(const GlobalOptions& g, const std::string& kind, std::ostream& out);
int cmd_matrix_oracle(const GlobalOptions& g, int pairs, int dim_min, int dim_max, int samples,
                      std::ostream& out);
int cmd_accept(const GlobalOptions& g, const std::string& fault, std::ostream& out, std::ostream& err);

/// Evenly spaced grid helper used by the response subcommand.
std::vector<double> linspace(double a, double b, int n);

}  // namespace ltlab::cli
