#include "coda/fixtures.hpp"

#include <array>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <ostream>

#include "coda/rng.hpp"
#include "coda/transforms.hpp"

namespace coda {

namespace {

struct PrintedRow {
    std::string_view id;
    std::array<std::string_view, 3> values;
};

constexpr std::array<std::string_view, 3> kTable1Names = {"Component A", "Component B",
                                                          "Component C"};

constexpr std::array<PrintedRow, 30> kTable1 = {{
    {"A1", {"0.4355095", "0.3392920924", "0.2251984"}},
    {"A2", {"0.4388882", "0.2135973967", "0.3475144"}},
    {"A3", {"0.4266460", "0.0305602623", "0.5427937"}},
    {"A4", {"0.4225122", "0.4097265913", "0.1677612"}},
    {"A5", {"0.4240518", "0.3024372049", "0.2735110"}},
    {"A6", {"0.4315424", "0.3605322539", "0.2079254"}},
    {"A7", {"0.4337943", "0.2779268820", "0.2882788"}},
    {"A8", {"0.4358406", "0.0006831432", "0.5634762"}},
    {"A9", {"0.4300394", "0.1057353415", "0.4642253"}},
    {"A10", {"0.4279817", "0.2512896242", "0.3207287"}},
    {"A11", {"0.4310879", "0.1469908804", "0.4219212"}},
    {"A12", {"0.4206820", "0.2268498575", "0.3524682"}},
    {"A13", {"0.4396177", "0.3852283802", "0.1751539"}},
    {"A14", {"0.4265380", "0.1160721475", "0.4573898"}},
    {"A15", {"0.4371975", "0.2550170900", "0.3077854"}},
    {"A16", {"0.4244092", "0.0314046749", "0.5441861"}},
    {"A17", {"0.4320087", "0.1992476493", "0.3687437"}},
    {"A18", {"0.4394902", "0.2748886793", "0.2856211"}},
    {"A19", {"0.4283819", "0.0134845902", "0.5581335"}},
    {"A20", {"0.4319368", "0.0743081935", "0.4937550"}},
    {"A21", {"0.4232230", "0.2074545214", "0.3693225"}},
    {"A22", {"0.4309724", "0.3602299476", "0.2087976"}},
    {"A23", {"0.4272409", "0.2970880808", "0.2756710"}},
    {"A24", {"0.4359625", "0.0453307017", "0.5187068"}},
    {"A25", {"0.4267075", "0.4053411348", "0.1679513"}},
    {"A26", {"0.4396363", "0.1278193992", "0.4325443"}},
    {"A27", {"0.4355290", "0.0837220492", "0.4807489"}},
    {"A28", {"0.4226007", "0.0204375902", "0.5569617"}},
    {"A29", {"0.4366681", "0.2144233973", "0.3489085"}},
    {"A30", {"0.4242957", "0.3395783944", "0.2361259"}},
}};

constexpr std::string_view kSyntheticName = "synthetic-alpha05";

double parse_printed(std::string_view text) {
    double value = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), value);
    return value;
}

std::string format17(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

void write_dataset17(const CompositionDataset& ds, std::ostream& out) {
    out << "id";
    for (const auto& name : ds.component_names()) out << ',' << name;
    out << '\n';
    for (std::size_t j = 0; j < ds.rows(); ++j) {
        out << ds.row_ids()[j];
        for (std::size_t i = 0; i < ds.parts(); ++i) out << ',' << format17(ds.row(j)[i]);
        out << '\n';
    }
}

} // namespace

CompositionDataset load_fixture_table1() {
    std::vector<Composition> rows;
    std::vector<std::string> ids;
    rows.reserve(kTable1.size());
    for (const auto& printed : kTable1) {
        Eigen::VectorXd v(3);
        for (int i = 0; i < 3; ++i) v[i] = parse_printed(printed.values[static_cast<std::size_t>(i)]);
        rows.emplace_back(std::move(v));
        ids.emplace_back(printed.id);
    }
    return CompositionDataset(std::move(rows), {kTable1Names.begin(), kTable1Names.end()},
                              std::move(ids));
}

Composition table1_arithmetic_mean() { return Composition{0.4306997, 0.2038899384, 0.3654103}; }

Composition table1_closed_geometric_mean() {
    return Composition{0.4778500, 0.1432412430, 0.3789087};
}

CompositionDataset synthetic_alpha_dataset(const SyntheticAlphaConfig& config) {
    const HelmertBasis H = helmert_basis(config.parts);
    const auto d = static_cast<Eigen::Index>(config.parts - 1);
    const double sd = std::sqrt(config.variance);
    Rng rng(config.seed);

    std::vector<Composition> rows;
    rows.reserve(config.rows);
    while (rows.size() < config.rows) {
        Eigen::VectorXd z(d);
        for (Eigen::Index k = 0; k < d; ++k) z[k] = sd * rng.normal();
        try {
            rows.push_back(inverse_alpha_isometric(z, config.alpha, H));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::OutsideSimplex) throw;
        }
    }
    std::vector<std::string> names;
    for (std::size_t i = 0; i < config.parts; ++i) names.push_back(std::string(1, static_cast<char>('A' + i)));
    std::vector<std::string> ids;
    for (std::size_t j = 1; j <= config.rows; ++j) ids.push_back("S" + std::to_string(j));
    return CompositionDataset(std::move(rows), std::move(names), std::move(ids));
}

std::vector<std::string> fixture_names() { return {"table1", std::string(kSyntheticName)}; }

namespace {

[[noreturn]] void unknown_fixture(std::string_view name) {
    std::string message = "unknown fixture '" + std::string(name) + "'; available:";
    for (const auto& known : fixture_names()) message += " " + known;
    throw Error(ErrorCode::UnknownFixture, message);
}

} // namespace

CompositionDataset load_fixture(std::string_view name) {
    if (name == "table1") return load_fixture_table1();
    if (name == kSyntheticName) return synthetic_alpha_dataset();
    unknown_fixture(name);
}

void write_fixture_csv(std::string_view name, std::ostream& out) {
    if (name == "table1") {
        out << "id";
        for (auto component : kTable1Names) out << ',' << component;
        out << '\n';
        for (const auto& printed : kTable1) {
            out << printed.id;
            for (auto value : printed.values) out << ',' << value;
            out << '\n';
        }
        return;
    }
    if (name == kSyntheticName) {
        write_dataset17(synthetic_alpha_dataset(), out);
        return;
    }
    unknown_fixture(name);
}

} // namespace coda
