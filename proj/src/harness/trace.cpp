#include "steklov/harness/trace.hpp"

#include "steklov/harness/io.hpp"

#include <charconv>
#include <sstream>

namespace steklov {

namespace {

constexpr int kFixedColumns = 10;  // everything except the coordinates

double to_double(const std::string& field) {
  std::size_t used = 0;
  const double v = std::stod(field, &used);
  if (used != field.size()) throw ConfigError("malformed number '" + field + "' in trace");
  return v;
}

int to_int(const std::string& field) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ConfigError("malformed integer '" + field + "' in trace");
  }
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

}  // namespace

std::string trace_header(int dim) {
  std::string h = "k,s";
  for (int i = 0; i < dim; ++i) h += ",x[" + std::to_string(i) + "]";
  h += ",surrogate_value,grad_norm,step_norm,l,radius,L_s,reg_weight,ratio";
  return h;
}

std::string trace_csv(const std::vector<IterationRecord>& records, int dim) {
  std::string out = trace_header(dim) + "\n";
  for (const auto& r : records) {
    require_dim(r.x.size(), dim, "trace row");
    out += std::to_string(r.k) + "," + std::to_string(r.s);
    for (int i = 0; i < dim; ++i) out += "," + format_double(r.x[i]);
    out += "," + format_double(r.surrogate_value) + "," + format_double(r.grad_norm) + "," +
           format_double(r.step_norm) + "," + std::to_string(r.l) + "," + format_double(r.radius) + "," +
           format_double(r.L_s) + "," + format_double(r.reg_weight) + "," + format_double(r.ratio) + "\n";
  }
  return out;
}

std::vector<IterationRecord> parse_trace_csv(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line)) throw ConfigError("empty trace");
  const auto header = split(line);
  const int dim = static_cast<int>(header.size()) - kFixedColumns;
  if (dim < 1 || line != trace_header(dim)) throw ConfigError("unexpected trace header");
  std::vector<IterationRecord> records;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (static_cast<int>(f.size()) != dim + kFixedColumns) throw ConfigError("trace row has the wrong width");
    IterationRecord r;
    r.k = to_int(f[0]);
    r.s = to_int(f[1]);
    r.x.resize(dim);
    for (int i = 0; i < dim; ++i) r.x[i] = to_double(f[2 + i]);
    std::size_t c = 2 + dim;
    r.surrogate_value = to_double(f[c++]);
    r.grad_norm = to_double(f[c++]);
    r.step_norm = to_double(f[c++]);
    r.l = to_int(f[c++]);
    r.radius = to_double(f[c++]);
    r.L_s = to_double(f[c++]);
    r.reg_weight = to_double(f[c++]);
    r.ratio = to_double(f[c++]);
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace steklov
