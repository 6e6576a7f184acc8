#include "relcoll/csv.hpp"

#include <array>
#include <charconv>
#include <stdexcept>

namespace relcoll {

std::string format_number(double x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (res.ec != std::errc()) throw std::runtime_error("format_number: conversion failed");
  return std::string(buf.data(), res.ptr);
}

std::string csv_header(std::span<const NormSpec> norms) {
  std::string out =
      "t,dt,mass,px,py,pz,energy,entropy,min_f,max_f,L_ratio_min,L_ratio_max";
  for (const NormSpec& s : norms) {
    out += ",lp_" + format_number(s.p) + "_" + format_number(s.k);
  }
  return out;
}

std::string csv_row(const DiagnosticsRecord& r) {
  std::string out;
  const auto put = [&out](double x) {
    if (!out.empty()) out += ',';
    out += format_number(x);
  };
  for (double x : {r.t, r.dt, r.mass, r.px, r.py, r.pz, r.energy, r.entropy, r.min_f, r.max_f,
                   r.L_ratio_min, r.L_ratio_max}) {
    put(x);
  }
  for (double x : r.lp_norms) put(x);
  return out;
}

CsvWriter::CsvWriter(std::ostream& out, std::span<const NormSpec> norms) : out_(out) {
  out_ << csv_header(norms) << '\n';
}

void CsvWriter::write(const DiagnosticsRecord& record) {
  out_ << csv_row(record) << '\n';
  out_.flush();
}

}  // namespace relcoll
