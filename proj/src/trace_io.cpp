#include "cdkit/trace_io.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "cdkit/errors.hpp"
#include "cdkit/format.hpp"

namespace cdkit {

namespace {

using nlohmann::json;

json number_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

double number_from(const json& j) {
  return j.is_null() ? kNaN : j.get<double>();
}

std::string cell(double v) { return std::isnan(v) ? std::string() : format_double(v); }

}  // namespace

std::string trace_to_json(const SolveTrace& trace) {
  json arr = json::array();
  for (const StepRecord& r : trace.records) {
    json o = json::object();
    o["k"] = r.k;
    o["rnorm"] = number_or_null(r.rnorm);
    o["a"] = number_or_null(r.a);
    o["gamma"] = number_or_null(r.gamma);
    o["sigma"] = number_or_null(r.sigma);
    o["omega"] = number_or_null(r.omega);
    o["pAp"] = number_or_null(r.p_a_p);
    arr.push_back(std::move(o));
  }
  return arr.dump(2);
}

void write_trace_csv(std::ostream& out, const SolveTrace& trace) {
  out << "k,rnorm,a,gamma,sigma,omega,pAp\n";
  for (const StepRecord& r : trace.records) {
    out << r.k << ',' << cell(r.rnorm) << ',' << cell(r.a) << ',' << cell(r.gamma)
        << ',' << cell(r.sigma) << ',' << cell(r.omega) << ',' << cell(r.p_a_p) << '\n';
  }
}

std::string trace_to_csv(const SolveTrace& trace) {
  std::ostringstream s;
  write_trace_csv(s, trace);
  return s.str();
}

SolveTrace trace_from_json(const std::string& text) {
  SolveTrace t;
  json arr;
  try {
    arr = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(e.what(), 1);
  }
  if (!arr.is_array()) throw ParseError("trace must be a JSON array", 1);
  for (const json& o : arr) {
    StepRecord r;
    r.k = o.at("k").get<std::size_t>();
    r.rnorm = number_from(o.at("rnorm"));
    r.a = number_from(o.at("a"));
    r.gamma = number_from(o.at("gamma"));
    r.sigma = number_from(o.at("sigma"));
    r.omega = number_from(o.at("omega"));
    r.p_a_p = number_from(o.at("pAp"));
    t.records.push_back(r);
  }
  return t;
}

}  // namespace cdkit
