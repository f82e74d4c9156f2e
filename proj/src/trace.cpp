#include "riemip/trace.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace riemip {

const char* const kTraceHeader =
    "k,mu,grad_norm,compl_norm,eq_norm,min_g,min_y,inner_iters,err_to_ref,p_hat,delta,nu,"
    "lambda_min_h";

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string trace_to_csv(const std::vector<IterationTrace>& trace) {
  std::string out = kTraceHeader;
  out += '\n';
  for (const auto& r : trace) {
    out += std::to_string(r.k);
    out += ',';
    out += fmt(r.mu);
    out += ',';
    out += fmt(r.grad_norm);
    out += ',';
    out += fmt(r.compl_norm);
    out += ',';
    out += fmt(r.eq_norm);
    out += ',';
    out += fmt(r.min_g);
    out += ',';
    out += fmt(r.min_y);
    out += ',';
    out += std::to_string(r.inner_iters);
    out += ',';
    out += fmt(r.err_to_ref);
    out += ',';
    out += fmt(r.p_hat);
    out += ',';
    out += fmt(r.delta);
    out += ',';
    out += fmt(r.nu);
    out += ',';
    out += fmt(r.lambda_min_h);
    out += '\n';
  }
  return out;
}

void write_trace_csv(const std::string& path, const std::vector<IterationTrace>& trace) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open trace file for writing: " + path);
  f << trace_to_csv(trace);
}

std::vector<IterationTrace> read_trace_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open trace file: " + path);
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("empty trace file: " + path);
  std::vector<IterationTrace> out;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ss, cell, ',')) vals.push_back(std::strtod(cell.c_str(), nullptr));
    if (vals.size() != 13) throw std::runtime_error("malformed trace row: " + line);
    IterationTrace r;
    r.k = static_cast<int>(vals[0]);
    r.mu = vals[1];
    r.grad_norm = vals[2];
    r.compl_norm = vals[3];
    r.eq_norm = vals[4];
    r.min_g = vals[5];
    r.min_y = vals[6];
    r.inner_iters = static_cast<int>(vals[7]);
    r.err_to_ref = vals[8];
    r.p_hat = vals[9];
    r.delta = vals[10];
    r.nu = vals[11];
    r.lambda_min_h = vals[12];
    out.push_back(r);
  }
  return out;
}

}  // namespace riemip
