#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "penlab/exactness.hpp"
#include "penlab/solver.hpp"

namespace penlab {

/// Fixed-format double for reproducible reports: %.17g, with non-finite
/// values as the strings inf/-inf/nan (quoted in JSON).
std::string format_double(double v);

/// Minimal streaming JSON emitter with deterministic key order and
/// %.17g number formatting (nlohmann-style libraries re-format doubles).
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view k);
  JsonWriter& value(double v);
  JsonWriter& value(int v);
  JsonWriter& value(long long v);
  JsonWriter& value(unsigned long long v);
  JsonWriter& value(bool v);
  JsonWriter& value(std::string_view v);
  JsonWriter& value(const Vec& v);
  const std::string& str() const { return out_; }

 private:
  void separator();
  std::string out_;
  std::vector<char> stack_;  // '{' or '['
  std::vector<bool> first_;
  bool pending_key_ = false;
};

void write_solve_report(JsonWriter& w, const SolveReport& report);
void write_exactness_report(JsonWriter& w, const ExactnessReport& report);
void write_relation_rows(JsonWriter& w, const std::vector<RelationRow>& rows);

/// CSV with header problem,family,relation,lhs,rhs,tol,pass
std::string relation_rows_csv(const std::vector<RelationRow>& rows);
std::vector<RelationRow> parse_relation_rows_csv(const std::string& text);

/// CSV with header start_index,iterations,value,stop_reason
std::string trace_csv(const SolveReport& report);

}  // namespace penlab
