#include "heatnorm/report_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace heatnorm::io
{

std::string format_number(double x)
{
  if (std::isnan(x))
    return "nan";
  if (std::isinf(x))
    return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc())
    throw std::runtime_error("format_number: conversion failed");
  return std::string(buf.data(), end);
}

namespace
{

std::string csv_cell(const Cell& cell)
{
  struct Visitor
  {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(const std::string& v) const { return v; }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  };
  return std::visit(Visitor{}, cell);
}

Json json_cell(const Cell& cell)
{
  struct Visitor
  {
    Json operator()(std::monostate) const { return nullptr; }
    Json operator()(double v) const { return v; }
    Json operator()(std::int64_t v) const { return v; }
    Json operator()(const std::string& v) const { return v; }
    Json operator()(bool v) const { return v; }
  };
  return std::visit(Visitor{}, cell);
}

Cell optional_cell(const std::optional<double>& v)
{
  return v ? Cell(*v) : Cell(std::monostate{});
}

}  // namespace

void Table::add_row(std::vector<Cell> row)
{
  if (row.size() != columns_.size())
    throw std::invalid_argument("Table::add_row: expected " + std::to_string(columns_.size()) +
                                " cells, got " + std::to_string(row.size()));
  rows_.push_back(std::move(row));
}

void Table::write_csv(std::ostream& os) const
{
  for (std::size_t i = 0; i < columns_.size(); ++i)
    os << (i ? "," : "") << columns_[i];
  os << '\n';
  for (const auto& row : rows_)
  {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << (i ? "," : "") << csv_cell(row[i]);
    os << '\n';
  }
}

Json Table::to_json(bool single) const
{
  auto record = [this](const std::vector<Cell>& row) {
    Json obj;
    for (std::size_t i = 0; i < columns_.size(); ++i)
      obj[columns_[i]] = json_cell(row[i]);
    return obj;
  };
  if (single && rows_.size() == 1)
    return record(rows_.front());
  Json arr = Json::array();
  for (const auto& row : rows_)
    arr.push_back(record(row));
  return arr;
}

Json RunManifest::to_json() const
{
  return {{"subcommand", subcommand},
          {"parameters", parameters},
          {"version", version},
          {"duration_seconds", duration_seconds}};
}

void RunManifest::write_csv_comments(std::ostream& os) const
{
  os << "# subcommand: " << subcommand << '\n';
  os << "# version: " << version << '\n';
  os << "# parameters: " << parameters.dump() << '\n';
  os << "# duration_seconds: " << format_number(duration_seconds) << '\n';
}

std::string tool_version()
{
#ifdef HEATNORM_VERSION
  return HEATNORM_VERSION;
#else
  return "unknown";
#endif
}

Table sweep_table(const std::vector<BoundCurveSample<double>>& samples)
{
  Table table({"t", "exact_m", "envelope_ub", "floor_lb", "dyadic_ub", "n_star", "normalized_exact"});
  for (const auto& s : samples)
    table.add_row({s.t.value(), s.exact_m, s.envelope_ub, optional_cell(s.floor_lb), s.dyadic_ub,
                   std::int64_t(s.n_star), s.normalized_exact});
  return table;
}

Table extremizer_table(const std::vector<ExtremizerReport<double>>& reports)
{
  Table table({"t", "lambda", "h1_norm", "heat_at_origin", "ratio", "paper_floor", "is_optimized"});
  for (const auto& r : reports)
    table.add_row({r.t.value(), r.lambda, r.h1_norm, r.heat_at_origin, r.ratio,
                   optional_cell(r.paper_floor), r.is_optimized});
  return table;
}

Table bg_table(const std::vector<BGReport<double>>& reports)
{
  Table table({"h1", "h2", "sup", "t_star", "rhs_two_term", "rhs_bg", "slack", "c_bg"});
  for (const auto& r : reports)
    table.add_row({r.h1, r.h2, r.sup, r.t_star, r.rhs_two_term, r.rhs_bg, r.slack, r.c_bg});
  return table;
}

Json to_json(const ExtremizerReport<double>& r)
{
  return extremizer_table({r}).to_json(true);
}

Json to_json(const BGReport<double>& r)
{
  return bg_table({r}).to_json(true);
}

}  // namespace heatnorm::io
