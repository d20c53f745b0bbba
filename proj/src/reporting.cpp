#include "riskpool/reporting.hpp"

#include <cfenv>
#include <cmath>
#include <sstream>

#include "riskpool/cost.hpp"
#include "riskpool/pricing.hpp"

namespace riskpool {

using nlohmann::json;

double round_half_even(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    // nearbyint honors the default FE_TONEAREST mode: ties go to even.
    return std::nearbyint(value * scale) / scale;
}

std::string format_money(double amount, int decimals) {
    const double rounded = round_half_even(amount, decimals);
    const bool negative = std::signbit(rounded) && rounded != 0.0;
    std::ostringstream digits;
    digits.setf(std::ios::fixed);
    digits.precision(decimals);
    digits << std::fabs(rounded);
    std::string text = digits.str();

    const auto point = text.find('.');
    std::string whole = point == std::string::npos ? text : text.substr(0, point);
    const std::string frac = point == std::string::npos ? "" : text.substr(point);
    for (int i = static_cast<int>(whole.size()) - 3; i > 0; i -= 3) {
        whole.insert(static_cast<size_t>(i), ",");
    }
    return (negative ? "-$" : "$") + whole + frac;
}

namespace {

struct TableScenario {
    Population pop;
    CostParams params;
};

TableScenario table_scenario(double r_high, Model model) {
    TableScenario s;
    s.pop.low = {0.02, 500};
    s.pop.high = {r_high, 500};
    s.params.insured_value = 1000.0;
    s.params.model = model;
    s.params.b_p = 2.0;
    return s;
}

GoldenTable build_table(const std::string& id, const std::string& title,
                        const TableScenario& s) {
    const PoolComposition grand = s.pop.grand();
    const PoolComposition low_alone{s.pop.low.count, 0};
    const PoolComposition high_alone{0, s.pop.high.count};

    const Money separate_low = cost(low_alone, s.pop, s.params) / low_alone.n_low;
    const Money separate_high = cost(high_alone, s.pop, s.params) / high_alone.n_high;
    const Money separate_total =
        cost(low_alone, s.pop, s.params) + cost(high_alone, s.pop, s.params);
    const Money pooled_total = cost(grand, s.pop, s.params);

    const PriceSchedule even = even_split_price(grand, s.pop, s.params);

    // Under the expected-value model the proportional (actuarially fair)
    // price is exactly the expected loss; the closed-form scheme applies to
    // the insolvency model only.
    PriceSchedule proportional;
    if (s.params.model == Model::insolvency) {
        proportional = proportional_price(grand, s.pop, s.params);
    } else {
        proportional.price_low = s.params.insured_value * s.pop.low.r;
        proportional.price_high = s.params.insured_value * s.pop.high.r;
    }

    GoldenTable table;
    table.id = id;
    table.title = title;
    table.rows = {
        {"Separate pools", separate_total, separate_low, separate_high},
        {"Pooled: even-split pricing", pooled_total, *even.price_low, *even.price_high},
        {"Pooled: proportional pricing", pooled_total, *proportional.price_low,
         *proportional.price_high},
    };
    return table;
}

void add_rounding_note(GoldenTable& table, double recomputed, long long reference) {
    const long long printed = static_cast<long long>(round_half_even(recomputed, 0));
    if (printed != reference) {
        std::ostringstream note;
        note << "separate-pools total recomputes to " << format_money(recomputed, 2)
             << " from unrounded pool costs; the reference table prints "
             << format_money(static_cast<double>(reference), 0)
             << " due to rounding of intermediate figures.";
        table.notes.push_back(note.str());
    }
}

}  // namespace

GoldenTable make_table1() {
    return build_table("table1", "Expected-value premiums, risks 2% / 2.5%",
                       table_scenario(0.025, Model::expected_value));
}

GoldenTable make_table2() {
    const TableScenario s = table_scenario(0.025, Model::insolvency);
    GoldenTable table =
        build_table("table2", "Insolvency premiums (b_p = 2), risks 2% / 2.5%", s);
    add_rounding_note(table, table.rows[0].total, 35741);
    return table;
}

GoldenTable make_table3() {
    const TableScenario s = table_scenario(0.04, Model::insolvency);
    GoldenTable table =
        build_table("table3", "Insolvency premiums (b_p = 2), risks 2% / 4%", s);
    add_rounding_note(table, table.rows[0].total, 45024);
    return table;
}

std::vector<GoldenTable> make_all_tables() {
    return {make_table1(), make_table2(), make_table3()};
}

std::string render_markdown(const GoldenTable& table) {
    std::ostringstream out;
    out << "### " << table.title << "\n\n";
    out << "| | Total | Low risk | High risk |\n";
    out << "|---|---|---|---|\n";
    for (const TableRow& row : table.rows) {
        out << "| " << row.label << " | " << format_money(row.total, 0) << " | "
            << (row.low ? format_money(*row.low, 2) : std::string("-")) << " | "
            << (row.high ? format_money(*row.high, 2) : std::string("-")) << " |\n";
    }
    for (const std::string& note : table.notes) {
        out << "\nNote: " << note << "\n";
    }
    return out.str();
}

std::string render_csv(const GoldenTable& table) {
    std::ostringstream out;
    out << "table,row,total,low_risk,high_risk\n";
    out.setf(std::ios::fixed);
    for (const TableRow& row : table.rows) {
        out.precision(0);
        out << table.id << ",\"" << row.label << "\"," << round_half_even(row.total, 0) << ",";
        out.precision(2);
        if (row.low) out << round_half_even(*row.low, 2);
        out << ",";
        if (row.high) out << round_half_even(*row.high, 2);
        out << "\n";
    }
    return out.str();
}

json table_to_json(const GoldenTable& table) {
    json doc;
    doc["id"] = table.id;
    doc["title"] = table.title;
    doc["rows"] = json::array();
    for (const TableRow& row : table.rows) {
        json r;
        r["label"] = row.label;
        r["total"] = row.total;
        r["total_rounded"] = round_half_even(row.total, 0);
        if (row.low) {
            r["low"] = *row.low;
            r["low_rounded"] = round_half_even(*row.low, 2);
        }
        if (row.high) {
            r["high"] = *row.high;
            r["high_rounded"] = round_half_even(*row.high, 2);
        }
        doc["rows"].push_back(std::move(r));
    }
    doc["notes"] = table.notes;
    return doc;
}

}  // namespace riskpool
