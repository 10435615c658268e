#include <doctest.h>

#include <cmath>
#include <set>

#include "upm/errors.hpp"
#include "upm/preprocess.hpp"
#include "upm/rng.hpp"

using namespace upm;

namespace {

// Column-wise constructor for numeric test data; nan marks a missing cell.
Dataset from_columns(const std::vector<std::string>& names,
                     const std::vector<std::vector<double>>& cols,
                     const std::vector<Label>& labels) {
    std::vector<AttributeDescriptor> attrs;
    for (std::size_t c = 0; c < names.size(); ++c)
        attrs.push_back({names[c], AttrKind::Numeric, {}, static_cast<int>(c)});
    std::vector<std::vector<Cell>> rows(cols[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c) {
            const double v = cols[c][r];
            rows[r].push_back(std::isnan(v) ? Cell::none() : Cell::numeric(v));
        }
    return Dataset({"columns", "test"}, attrs, std::move(rows), std::vector<Label>(labels));
}

const double kMiss = std::nan("");

}  // namespace

TEST_SUITE("preprocess") {

TEST_CASE("constant attributes are dropped, median imputation then scaling") {
    const Dataset ds = from_columns({"const", "x"}, {{7, 7, 7}, {2, kMiss, 6}},
                                    {Label::Placed, Label::Unplaced, Label::Placed});
    auto [cleaned, t] = clean(ds, CleanConfig{});
    CHECK(cleaned.n_attributes() == 1);
    CHECK(cleaned.attribute(0).name == "x");
    // Median of {2, 6} is 4; min-max over {2, 4, 6} maps it to 0.5.
    CHECK(cleaned.cell(0, 0).value == doctest::Approx(0.0));
    CHECK(cleaned.cell(1, 0).value == doctest::Approx(0.5));
    CHECK(cleaned.cell(2, 0).value == doctest::Approx(1.0));
    CHECK(t.kept.size() == 1);
    CHECK(t.kept[0].raw_index == 1);
    CHECK(t.kept[0].scale->min == 2.0);
    CHECK(t.kept[0].scale->max == 6.0);
}

TEST_CASE("zero missing tolerance drops any attribute with a gap") {
    const Dataset ds = from_columns({"a", "b"}, {{1, kMiss, 3}, {4, 5, 6}},
                                    {Label::Placed, Label::Unplaced, Label::Placed});
    CleanConfig cfg;
    cfg.max_missing_fraction = 0.0;
    auto [cleaned, t] = clean(ds, cfg);
    CHECK(cleaned.n_attributes() == 1);
    CHECK(cleaned.attribute(0).name == "b");
}

TEST_CASE("cleaning that drops everything is an error") {
    const Dataset all_const = from_columns({"a"}, {{3, 3, 3}},
                                           {Label::Placed, Label::Unplaced, Label::Placed});
    CHECK_THROWS_AS(clean(all_const, CleanConfig{}), DataError);
}

TEST_CASE("drop_row removes incomplete instances and errors when none survive") {
    const Dataset ds = from_columns({"a", "b"}, {{1, kMiss, 3}, {4, 5, 6}},
                                    {Label::Placed, Label::Unplaced, Label::Placed});
    CleanConfig cfg;
    cfg.impute = CleanConfig::Impute::DropRow;
    auto [cleaned, t] = clean(ds, cfg);
    CHECK(cleaned.n_rows() == 2);
    CHECK(cleaned.label(0) == Label::Placed);
    CHECK(cleaned.label(1) == Label::Placed);

    const Dataset all_missing =
        from_columns({"a", "b"}, {{kMiss, 1.0}, {2.0, kMiss}}, {Label::Placed, Label::Unplaced});
    CHECK_THROWS_AS(clean(all_missing, cfg), DataError);
}

TEST_CASE("apply on the fitting data reproduces the fit output") {
    Rng rng(31);
    std::vector<std::vector<double>> cols(3, std::vector<double>(20));
    std::vector<Label> labels;
    for (int r = 0; r < 20; ++r) {
        for (auto& col : cols) col[static_cast<std::size_t>(r)] = rng.next_normal();
        labels.push_back(r % 3 == 0 ? Label::Placed : Label::Unplaced);
    }
    cols[1][4] = kMiss;
    const Dataset ds = from_columns({"a", "b", "c"}, cols, labels);
    auto [cleaned, t] = clean(ds, CleanConfig{});
    const Dataset replay = apply_transform(t, ds);
    CHECK(cleaned.same_content(replay));
}

TEST_CASE("fresh values clip to [0,1] and fresh gaps use stored imputation") {
    const Dataset train = from_columns({"x"}, {{2, 4, 6}},
                                       {Label::Placed, Label::Unplaced, Label::Placed});
    auto [cleaned, t] = clean(train, CleanConfig{});
    const Dataset fresh = from_columns({"x"}, {{100, -5, kMiss}},
                                       {Label::Placed, Label::Placed, Label::Unplaced});
    const Dataset out = apply_transform(t, fresh);
    CHECK(out.cell(0, 0).value == 1.0);   // above train max
    CHECK(out.cell(1, 0).value == 0.0);   // below train min
    CHECK(out.cell(2, 0).value == 0.5);   // imputed with the stored median 4
}

TEST_CASE("schema mismatch is rejected") {
    const Dataset train = from_columns({"x", "y"}, {{1, 2}, {3, 4}},
                                       {Label::Placed, Label::Unplaced});
    auto [cleaned, t] = clean(train, CleanConfig{});
    const Dataset other = from_columns({"x", "z"}, {{1, 2}, {3, 4}},
                                       {Label::Placed, Label::Unplaced});
    CHECK_THROWS_AS(apply_transform(t, other), DataError);
    const Dataset narrower = from_columns({"x"}, {{1, 2}}, {Label::Placed, Label::Unplaced});
    CHECK_THROWS_AS(apply_transform(t, narrower), DataError);
}

TEST_CASE("identical columns share a cluster and one representative survives") {
    Rng rng(7);
    std::vector<double> x, z;
    std::vector<Label> labels;
    for (int i = 0; i < 40; ++i) {
        x.push_back(rng.next_normal());
        z.push_back(rng.next_normal());
        labels.push_back(i % 2 ? Label::Placed : Label::Unplaced);
    }
    const Dataset raw = from_columns({"x", "x2", "z"}, {x, x, z}, labels);
    auto [cleaned, t] = clean(raw, CleanConfig{});
    const auto acs = cluster_attributes(cleaned, std::nullopt, 5);
    CHECK(acs.k_used == 2);
    // x and x2 are perfectly associated, so they share a cluster.
    int cluster_x = -1, cluster_x2 = -1, cluster_z = -1;
    for (std::size_t c = 0; c < acs.clusters.size(); ++c)
        for (int m : acs.clusters[c]) {
            if (m == 0) cluster_x = static_cast<int>(c);
            if (m == 1) cluster_x2 = static_cast<int>(c);
            if (m == 2) cluster_z = static_cast<int>(c);
        }
    CHECK(cluster_x == cluster_x2);
    CHECK(cluster_x != cluster_z);
    CHECK(acs.representatives.size() == 2);

    auto [reduced, t2] = select_and_transform(cleaned, acs, t);
    CHECK(reduced.n_attributes() == 2);
}

TEST_CASE("explicit k = 1 keeps the globally most relevant attribute") {
    Rng rng(11);
    std::vector<double> strong, weak;
    std::vector<Label> labels;
    for (int i = 0; i < 60; ++i) {
        const Label l = i % 2 ? Label::Placed : Label::Unplaced;
        labels.push_back(l);
        strong.push_back((l == Label::Placed ? 1.0 : 0.0) + 0.1 * rng.next_normal());
        weak.push_back(rng.next_normal());
    }
    const Dataset raw = from_columns({"weak", "strong"}, {weak, strong}, labels);
    auto [cleaned, t] = clean(raw, CleanConfig{});
    const auto acs = cluster_attributes(cleaned, 1, 5);
    CHECK(acs.k_used == 1);
    REQUIRE(acs.representatives.size() == 1);
    CHECK(cleaned.attribute(acs.representatives[0]).name == "strong");
    CHECK(acs.relevance[1] > acs.relevance[0]);
}

TEST_CASE("explicit k = A selects every attribute (identity)") {
    const Dataset raw = from_columns({"a", "b", "c"}, {{1, 2, 3}, {2, 1, 3}, {5, 1, 2}},
                                     {Label::Placed, Label::Unplaced, Label::Placed});
    auto [cleaned, t] = clean(raw, CleanConfig{});
    const auto acs = cluster_attributes(cleaned, 3, 5);
    CHECK(acs.k_used == 3);
    auto [reduced, t2] = select_and_transform(cleaned, acs, t);
    CHECK(reduced.n_attributes() == 3);
    CHECK_THROWS_AS(cluster_attributes(cleaned, 4, 5), DataError);
}

TEST_CASE("clustering requires cleaned input and at least two attributes") {
    const Dataset with_gap = from_columns({"a", "b"}, {{1, kMiss}, {2, 3}},
                                          {Label::Placed, Label::Unplaced});
    CHECK_THROWS_AS(cluster_attributes(with_gap, std::nullopt, 1), DataError);
    const Dataset one = from_columns({"a"}, {{1, 2}}, {Label::Placed, Label::Unplaced});
    CHECK_THROWS_AS(cluster_attributes(one, std::nullopt, 1), DataError);
}

TEST_CASE("clustering is deterministic for a fixed seed") {
    Rng rng(13);
    std::vector<std::vector<double>> cols(6, std::vector<double>(50));
    std::vector<Label> labels;
    for (int r = 0; r < 50; ++r) {
        for (auto& col : cols) col[static_cast<std::size_t>(r)] = rng.next_normal();
        labels.push_back(r % 2 ? Label::Placed : Label::Unplaced);
    }
    const Dataset raw =
        from_columns({"a", "b", "c", "d", "e", "f"}, cols, labels);
    auto [cleaned, t] = clean(raw, CleanConfig{});
    const auto acs1 = cluster_attributes(cleaned, std::nullopt, 99);
    const auto acs2 = cluster_attributes(cleaned, std::nullopt, 99);
    CHECK(acs1.k_used == acs2.k_used);
    CHECK(acs1.clusters == acs2.clusters);
    CHECK(acs1.representatives == acs2.representatives);

    // Representatives are pairwise distinct, one per cluster.
    std::set<int> reps(acs1.representatives.begin(), acs1.representatives.end());
    CHECK(reps.size() == acs1.representatives.size());
    CHECK(acs1.representatives.size() == static_cast<std::size_t>(acs1.k_used));
}

TEST_CASE("association measures behave on crafted pairs") {
    Rng rng(17);
    std::vector<double> x, noisy, indep;
    std::vector<Label> labels;
    for (int i = 0; i < 200; ++i) {
        const double v = rng.next_normal();
        x.push_back(v);
        noisy.push_back(v + 0.05 * rng.next_normal());
        indep.push_back(rng.next_normal());
        labels.push_back(i % 2 ? Label::Placed : Label::Unplaced);
    }
    const Dataset ds = from_columns({"x", "noisy", "indep"}, {x, noisy, indep}, labels);
    CHECK(attribute_association(ds, 0, 1) > 0.98);
    CHECK(attribute_association(ds, 0, 2) < 0.2);
    CHECK(attribute_association(ds, 0, 1) == attribute_association(ds, 1, 0));
}

}  // TEST_SUITE
