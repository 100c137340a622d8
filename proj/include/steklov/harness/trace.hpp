#pragma once

#include "steklov/solver.hpp"

#include <string>
#include <vector>

namespace steklov {

/// CSV header: k,s,x[0],...,x[n-1],surrogate_value,grad_norm,step_norm,l,radius,L_s,reg_weight,ratio
std::string trace_header(int dim);
std::string trace_csv(const std::vector<IterationRecord>& records, int dim);

/// Parses a trace back into records (step vectors are not stored and come back empty).
std::vector<IterationRecord> parse_trace_csv(const std::string& text);

}  // namespace steklov
