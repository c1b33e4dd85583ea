#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace idie::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kCertificateFail = 3,
    kNoConvergence = 4,
    kViolation = 5,
};

/// Runs one subcommand; `args` excludes the program name.
///
///   solve       --config PATH [--out PATH]
///   certify     --config PATH
///   apriori     --config PATH [--with-solve]
///   bound       --config PATH --kind initial|parameter|function [gaps] [--empirical]
///   inequality  [--config PATH] [--samples N] [--seed K] [--out PATH]
///   compare     --config A --config B
///
/// `--param NAME=VALUE` overrides a problem parameter on any config-driven command.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace idie::cli
