#include <gtest/gtest.h>

#include "heyde/json_io.hpp"

using namespace heyde;
using heyde::io::json;

namespace {

json instance_json(const std::string& mu1_probs) {
    return io::parse_text(R"({"group": {"cyclic_orders": [9]}, "alpha": {"matrix": [[5]]},
                              "mu1": {"probs": )" + mu1_probs + R"(},
                              "mu2": {"probs": {"0": "1"}}})");
}

}  // namespace

TEST(JsonIo, ParsesCanonicalInstance) {
    const auto inst = io::parse_instance(io::read_file(std::string(HEYDE_SAMPLES_DIR) + "/z9_kernel_counterexample.json"));
    const FiniteAbelianGroup z9({9});
    EXPECT_EQ(inst.group(), z9);
    EXPECT_TRUE(inst.is_canonical());
    EXPECT_EQ(inst.alpha(), Endomorphism::scalar(z9, 5));
    EXPECT_EQ(inst.mu1.mass(z9.element({3})), Rational(1, 2));
    EXPECT_EQ(inst.mu1, inst.mu2);
}

TEST(JsonIo, ParsesGeneralForms) {
    const auto inst = io::parse_instance(io::read_file(std::string(HEYDE_SAMPLES_DIR) + "/z9x3_general_forms.json"));
    EXPECT_FALSE(inst.is_canonical());
    const auto& g = inst.group();
    EXPECT_EQ(g.cyclic_orders(), (std::vector<std::int64_t>{9, 3}));
    EXPECT_EQ(inst.alpha2.apply(g.element({0, 1})), g.element({3, 2}));
    EXPECT_EQ(inst.mu1.mass(g.element({4, 1})), Rational(1, 6));
}

TEST(JsonIo, RoundTrip) {
    for (const char* name : {"z9_kernel_counterexample.json", "z9x3_general_forms.json", "z15_haar_pair.json"}) {
        const auto inst = io::parse_instance(io::read_file(std::string(HEYDE_SAMPLES_DIR) + "/" + name));
        const auto back = io::parse_instance(io::parse_text(io::to_json(inst).dump()));
        EXPECT_EQ(back.alpha1, inst.alpha1);
        EXPECT_EQ(back.beta2, inst.beta2);
        EXPECT_EQ(back.mu1, inst.mu1);
        EXPECT_EQ(back.mu2, inst.mu2);
        EXPECT_EQ(io::to_json(back).dump(), io::to_json(inst).dump());
    }
}

TEST(JsonIo, Serialization) {
    const FiniteAbelianGroup g({9, 3});
    EXPECT_EQ(io::to_json(g).dump(), R"({"cyclic_orders":[9,3]})");
    EXPECT_EQ(io::to_json(g.element({4, 2})).dump(), R"("4,2")");
    const auto mu = Distribution::from_weights(g, {{g.zero(), 1}, {g.element({1, 2}), 2}});
    EXPECT_EQ(io::to_json(mu).dump(), R"({"probs":{"0,0":"1/3","1,2":"2/3"}})");
    const auto k = subgroup_generated(g, {g.element({3, 0})});
    const auto kj = io::to_json(k);
    EXPECT_EQ(kj["size"], 3);
    EXPECT_EQ(kj["elements"].dump(), R"(["0,0","3,0","6,0"])");
    EXPECT_EQ(io::witness_json(std::nullopt).dump(), "null");
    EXPECT_EQ(io::witness_json(ElementPair{g.element({1, 0}), g.zero()}).dump(), R"({"s":"1,0","t":"0,0"})");
    ScanSummary s;
    EXPECT_EQ(io::to_json(s).dump(), R"({"evaluated":0,"symmetric":0,"idempotent":0,"degenerate":0,"other":0})");
}

TEST(JsonIo, SchemaErrors) {
    EXPECT_THROW(io::parse_text("{"), SchemaError);
    EXPECT_THROW(io::read_file("/nonexistent/instance.json"), SchemaError);
    EXPECT_THROW(io::parse_instance(io::read_file(std::string(HEYDE_SAMPLES_DIR) + "/bad_fraction.json")), SchemaError);
    EXPECT_THROW(io::parse_instance(instance_json(R"({"0": "1/2"})")), SchemaError);                // mass 1/2
    EXPECT_THROW(io::parse_instance(instance_json(R"({"0": "3/2", "1": "-1/2"})")), SchemaError);   // negative
    EXPECT_THROW(io::parse_instance(instance_json(R"({"9": "1"})")), SchemaError);                  // unreduced
    EXPECT_THROW(io::parse_instance(instance_json(R"({"3": "1/2", "03": "1/2"})")), SchemaError);   // duplicate
    EXPECT_THROW(io::parse_instance(instance_json(R"({"x": "1"})")), SchemaError);
    EXPECT_THROW(io::parse_instance(instance_json(R"({"0": 1})")), SchemaError);
    EXPECT_THROW(io::parse_instance(instance_json(R"({"0,0": "1"})")), SchemaError);
    EXPECT_THROW(io::parse_instance(instance_json(R"([])")), SchemaError);
    EXPECT_THROW(io::parse_group(io::parse_text(R"({"cyclic_orders": []})")), SchemaError);
    EXPECT_THROW(io::parse_group(io::parse_text(R"({"cyclic_orders": [0]})")), SchemaError);
    EXPECT_THROW(io::parse_group(io::parse_text(R"({"cyclic_orders": [2.5]})")), SchemaError);
    EXPECT_THROW(io::parse_group(io::parse_text(R"({"orders": [3]})")), SchemaError);
    const FiniteAbelianGroup g({9, 3});
    EXPECT_THROW(io::parse_endomorphism(g, io::parse_text(R"({"matrix": [[1, 0]]})")), SchemaError);
    // a_01 = 1 needs 3 * 1 = 0 mod 9.
    EXPECT_THROW(io::parse_endomorphism(g, io::parse_text(R"({"matrix": [[1, 1], [0, 1]]})")), SchemaError);
    EXPECT_NO_THROW(io::parse_endomorphism(g, io::parse_text(R"({"matrix": [[1, 3], [1, 1]]})")));
    EXPECT_THROW(io::parse_instance(io::parse_text(R"({"group": {"cyclic_orders": [5]}, "alpha": {"matrix": [[2]]},
        "alpha1": {"matrix": [[1]]}, "mu1": {"probs": {"0": "1"}}, "mu2": {"probs": {"0": "1"}}})")),
                 SchemaError);
}
