#include "penlab/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "penlab/errors.hpp"

namespace penlab {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void JsonWriter::separator() {
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (!stack_.empty()) {
    if (!first_.back()) out_ += ',';
    first_.back() = false;
  }
}

JsonWriter& JsonWriter::begin_object() {
  separator();
  out_ += '{';
  stack_.push_back('{');
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += '}';
  stack_.pop_back();
  first_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  separator();
  out_ += '[';
  stack_.push_back('[');
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += ']';
  stack_.pop_back();
  first_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::key(std::string_view k) {
  separator();
  out_ += '"';
  out_ += k;
  out_ += "\":";
  pending_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  separator();
  if (std::isfinite(v)) {
    out_ += format_double(v);
  } else {
    out_ += '"';
    out_ += format_double(v);
    out_ += '"';
  }
  return *this;
}

JsonWriter& JsonWriter::value(int v) { return value(static_cast<long long>(v)); }

JsonWriter& JsonWriter::value(long long v) {
  separator();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(unsigned long long v) {
  separator();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  separator();
  out_ += v ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::value(std::string_view v) {
  separator();
  out_ += '"';
  for (char c : v) {
    switch (c) {
      case '"': out_ += "\\\""; break;
      case '\\': out_ += "\\\\"; break;
      case '\n': out_ += "\\n"; break;
      case '\t': out_ += "\\t"; break;
      default: out_ += c;
    }
  }
  out_ += '"';
  return *this;
}

JsonWriter& JsonWriter::value(const Vec& v) {
  begin_array();
  for (double x : v) value(x);
  return end_array();
}

void write_solve_report(JsonWriter& w, const SolveReport& report) {
  w.begin_object();
  w.key("best_point").value(report.best_point);
  w.key("best_value").value(report.best_value);
  w.key("converged").value(report.converged);
  w.key("unbounded").value(report.unbounded);
  if (report.oracle_gap) w.key("oracle_gap").value(*report.oracle_gap);
  w.key("traces").begin_array();
  for (const StartTrace& t : report.traces) {
    w.begin_object();
    w.key("start_index").value(t.start_index);
    w.key("iterations").value(t.iterations);
    w.key("value").value(t.value);
    w.key("stop_reason").value(t.stop_reason);
    w.end_object();
  }
  w.end_array();
  w.end_object();
}

void write_relation_rows(JsonWriter& w, const std::vector<RelationRow>& rows) {
  w.begin_array();
  for (const RelationRow& r : rows) {
    w.begin_object();
    w.key("problem").value(r.problem);
    w.key("family").value(r.family);
    w.key("relation").value(r.relation);
    w.key("lhs").value(r.lhs);
    w.key("rhs").value(r.rhs);
    w.key("tol").value(r.tol);
    w.key("pass").value(r.pass);
    if (!r.note.empty()) w.key("note").value(r.note);
    w.end_object();
  }
  w.end_array();
}

void write_exactness_report(JsonWriter& w, const ExactnessReport& report) {
  w.begin_object();
  w.key("problem").value(report.problem);
  w.key("family").value(report.family.label());
  const char* status = "indeterminate";
  switch (report.status) {
    case ExactnessReport::Status::estimated: status = "estimated"; break;
    case ExactnessReport::Status::not_exact: status = "not_exact"; break;
    case ExactnessReport::Status::inconsistent: status = "inconsistent"; break;
    case ExactnessReport::Status::indeterminate: break;
  }
  w.key("status").value(std::string_view(status));
  if (report.status == ExactnessReport::Status::estimated)
    w.key("estimate").value(report.estimate);
  w.key("bracket_lo").value(report.bracket_lo);
  w.key("bracket_hi").value(report.bracket_hi);
  w.key("tol").value(report.tol);
  w.key("f_star").value(report.f_star);
  w.key("eps_max").value(report.eps_max);
  if (!report.inconsistency_note.empty())
    w.key("inconsistency").value(report.inconsistency_note);
  w.key("observations").begin_array();
  for (const auto& [param, exact] : report.observations) {
    w.begin_object();
    w.key("parameter").value(param);
    w.key("exact").value(exact);
    w.end_object();
  }
  w.end_array();
  w.key("relations");
  write_relation_rows(w, report.relations);
  w.end_object();
}

std::string relation_rows_csv(const std::vector<RelationRow>& rows) {
  std::string out = "problem,family,relation,lhs,rhs,tol,pass\n";
  for (const RelationRow& r : rows) {
    out += r.problem + ',' + r.family + ',' + r.relation + ',' + format_double(r.lhs) +
           ',' + format_double(r.rhs) + ',' + format_double(r.tol) + ',' +
           (r.pass ? "1" : "0") + '\n';
  }
  return out;
}

namespace {

double parse_csv_double(const std::string& field) {
  if (field == "inf") return kInf;
  if (field == "-inf") return -kInf;
  if (field == "nan") return std::nan("");
  try {
    return std::stod(field);
  } catch (const std::exception&) {
    throw config_error("relation CSV: bad numeric field '" + field + "'");
  }
}

}  // namespace

std::vector<RelationRow> parse_relation_rows_csv(const std::string& text) {
  std::vector<RelationRow> rows;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      if (line != "problem,family,relation,lhs,rhs,tol,pass")
        throw config_error("relation CSV: unexpected header '" + line + "'");
      header = false;
      continue;
    }
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    fields.push_back(cur);
    if (fields.size() != 7) throw config_error("relation CSV: expected 7 fields");
    RelationRow r;
    r.problem = fields[0];
    r.family = fields[1];
    r.relation = fields[2];
    r.lhs = parse_csv_double(fields[3]);
    r.rhs = parse_csv_double(fields[4]);
    r.tol = parse_csv_double(fields[5]);
    r.pass = fields[6] == "1";
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string trace_csv(const SolveReport& report) {
  std::string out = "start_index,iterations,value,stop_reason\n";
  for (const StartTrace& t : report.traces) {
    out += std::to_string(t.start_index) + ',' + std::to_string(t.iterations) + ',' +
           format_double(t.value) + ',' + t.stop_reason + '\n';
  }
  return out;
}

}  // namespace penlab
