#include <gtest/gtest.h>

#include <limits>

#include "hubbard/app.hpp"

using namespace hubbard;
using namespace hubbard::io;

namespace {
Table sample() {
    Table t({"a", "b", "c"}, json{{"note", "x"}});
    t.add({0.1, -1.0 / 3.0, 1e-300});
    t.add({std::numbers::pi, 6.02214076e23, -0.0});
    t.add({std::nextafter(1.0, 2.0), 123456789.123456789, 5e-324});
    return t;
}

void expect_identical(const Table& a, const Table& b) {
    ASSERT_EQ(a.columns, b.columns);
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i)
        for (std::size_t j = 0; j < a.rows[i].size(); ++j) EXPECT_EQ(a.rows[i][j], b.rows[i][j]);
    EXPECT_EQ(a.meta, b.meta);
}
}  // namespace

TEST(Table, CsvRoundTripIsBitExact) { expect_identical(sample(), from_csv(to_csv(sample()))); }

TEST(Table, JsonRoundTripIsBitExact) { expect_identical(sample(), from_json(to_json(sample()))); }

TEST(Table, NonFiniteValuesSurviveJson) {
    Table t({"v"});
    t.add({std::numeric_limits<double>::infinity()});
    t.add({-std::numeric_limits<double>::infinity()});
    auto back = from_json(to_json(t));
    EXPECT_EQ(back.rows[0][0], std::numeric_limits<double>::infinity());
    EXPECT_EQ(back.rows[1][0], -std::numeric_limits<double>::infinity());
}

TEST(Table, RowWidthIsChecked) {
    Table t({"a", "b"});
    EXPECT_THROW(t.add({1.0}), hubbard::domain_error);
    EXPECT_THROW(t.column("z"), hubbard::domain_error);
}

TEST(Report, RelativeDeviationIsSymmetricAndGuarded) {
    EXPECT_DOUBLE_EQ(relative_deviation(1.0, 1.1), relative_deviation(1.1, 1.0));
    EXPECT_NEAR(relative_deviation(1.0, 1.1), 0.1 / 1.1, 1e-15);
    EXPECT_EQ(relative_deviation(0.0, 0.0), 0.0);
    ComparisonReport r;
    r.add("x", 1.0, 1.05, 0.1);
    EXPECT_TRUE(r.pass());
    r.add("y", 1.0, 2.0, 0.1);
    EXPECT_FALSE(r.pass());
    EXPECT_NEAR(r.worst(), 0.5, 1e-15);
    EXPECT_EQ(r.table().meta["labels"].size(), 2u);
}

TEST(Config, DefaultsValidate) { EXPECT_NO_THROW(RunConfig().validate()); }

TEST(Config, ErrorsNameTheKey) {
    auto message = [](auto&& f) {
        try {
            f();
        } catch (const config_error& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_NE(message([] { RunConfig::from_text(R"({"lattice": {"hopping": 1}})"); }).find("lattice.hopping"), std::string::npos);
    EXPECT_NE(message([] { RunConfig::from_text(R"({"numeric": {"dt": "fast"}})"); }).find("numeric.dt"), std::string::npos);
    EXPECT_NE(message([] {
                  RunConfig c;
                  c.set("lattice.U", "-1");
                  c.validate();
              }).find("lattice.U"),
              std::string::npos);
    EXPECT_NE(message([] {
                  RunConfig c;
                  c.set("numeric.dt", "10");
                  c.validate();
              }).find("numeric.dt"),
              std::string::npos);
    EXPECT_NE(message([] { RunConfig().set("numeric.grid", "many"); }).find("numeric.grid"), std::string::npos);
    EXPECT_THROW(RunConfig::from_text("{not json"), config_error);
}

TEST(Config, OverridesAndFileValuesMerge) {
    auto c = RunConfig::from_text(R"({"lattice": {"extent": [4, 4], "J": 1}, "model": "fermi"} // trailing comment)");
    EXPECT_EQ(c.lattice().extent, (std::vector<int>{4, 4}));
    EXPECT_DOUBLE_EQ(c.number("lattice.J"), 1.0);
    EXPECT_TRUE(c.data()["lattice"]["J"].is_number_float());
    c.set("lattice.extent", "3x5");
    EXPECT_EQ(c.lattice().extent, (std::vector<int>{3, 5}));
    EXPECT_TRUE(c.explicitly_set("lattice.extent"));
    EXPECT_FALSE(c.explicitly_set("numeric.dt"));
}

TEST(App, RunsAreDeterministic) {
    RunConfig c;
    c.set("lattice.extent", "16");
    c.set("experiment", "quench");
    c.set("numeric.t_final", "2");
    EXPECT_EQ(to_csv(app::run(c)), to_csv(app::run(c)));
    c.set("model", "bose");
    c.set("experiment", "ed-ground");
    c.set("lattice.extent", "6");
    EXPECT_EQ(to_json(app::run(c)), to_json(app::run(c)));
}

TEST(App, OutputEchoesConfiguration) {
    RunConfig c;
    c.set("lattice.extent", "8");
    auto t = app::run(c);
    EXPECT_EQ(t.meta["config"], c.data());
    auto back = from_csv(to_csv(t));
    EXPECT_EQ(back.meta["config"], c.data());
}

TEST(App, UnknownExperimentsAndRecipesAreConfigErrors) {
    RunConfig c;
    c.set("experiment", "sideways");
    EXPECT_THROW(app::run(c), config_error);
    EXPECT_THROW(app::reproduce("no-such-figure", RunConfig()), config_error);
    c.set("model", "fermi");
    c.set("experiment", "ed-ground");
    EXPECT_THROW(app::run(c), config_error);
}

TEST(App, EdComparisonAgreesAtWeakHopping) {
    auto report = app::compare_ed_z1(LatticeSpec::chain(6, 0.05, 1.0));
    EXPECT_FALSE(report.rows.empty());
    EXPECT_TRUE(report.pass()) << "worst deviation " << report.worst();
}
