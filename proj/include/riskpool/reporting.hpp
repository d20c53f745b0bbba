#ifndef RISKPOOL_REPORTING_HPP
#define RISKPOOL_REPORTING_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace riskpool {

// Banker's rounding (half to even) at `decimals` fractional digits.
double round_half_even(double value, int decimals);

// "$31,878" (decimals = 0) or "$32.52" (decimals = 2), half-even rounded.
std::string format_money(double amount, int decimals);

struct TableRow {
    std::string label;
    double total = 0.0;
    std::optional<double> low;
    std::optional<double> high;
};

struct GoldenTable {
    std::string id;
    std::string title;
    std::vector<TableRow> rows;
    std::vector<std::string> notes;
};

// The three worked pricing tables, rebuilt from first principles:
//   table1 - expected-value premiums, r = (0.02, 0.025), 500/500, V = 1000
//   table2 - insolvency premiums (b_p = 2), same risks
//   table3 - insolvency premiums, high risk raised to 0.04
GoldenTable make_table1();
GoldenTable make_table2();
GoldenTable make_table3();
std::vector<GoldenTable> make_all_tables();

// Per-person cells rounded to cents, totals to whole dollars; raw values are
// carried in the JSON form only.
std::string render_markdown(const GoldenTable& table);
std::string render_csv(const GoldenTable& table);
nlohmann::json table_to_json(const GoldenTable& table);

}  // namespace riskpool

#endif  // RISKPOOL_REPORTING_HPP
