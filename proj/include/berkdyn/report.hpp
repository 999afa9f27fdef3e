#pragma once

#include <json.hpp>

#include "berkdyn/dynamics.hpp"
#include "berkdyn/parse.hpp"

namespace berkdyn {

using Json = nlohmann::ordered_json;

/// One unit of CLI work: a subcommand plus its parameters.
struct JobSpec {
    std::string command;
    std::string map_text;
    long p = 0;
    std::string point;      // tree point, II(a,t) / I(x)
    std::string value;      // projective point for classify/orbit/preimages
    std::string ball;       // "a;t;open|closed"
    std::string annulus;    // "center;t_in;t_out"
    std::string direction;  // residue at the tree point: digit or "inf"
    int n = 1;              // iterate count / period
    int m_max = 12;         // epsilon-norm levels
    Rat step0 = 1;          // march step
    Budgets budgets;
};

JobSpec job_from_json(const Json& j);

/// Execute a job; throws berkdyn::Error on invalid input or honest failures.
Json run(const JobSpec& job);

/// Exit code for an error class: 2 input, 3 budget, 4 partial support,
/// 5 internal invariant violation.
int exit_code_for(ErrorCode c);

} // namespace berkdyn
