#include <gtest/gtest.h>

#include <sstream>

#include "edwardsg2/cli.hpp"
#include "support.hpp"

using namespace edwardsg2;
using json = nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
    json doc() const { return json::parse(out); }
};

Result call(std::vector<std::string> args) {
    args.insert(args.begin(), "edwardsg2");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> example(const std::string& verb, std::vector<std::string> extra = {}) {
    std::vector<std::string> a{verb, "--p", "1201", "--frak-a", "6", "--b", "7", "--c", "11"};
    a.insert(a.end(), extra.begin(), extra.end());
    return a;
}

} // namespace

TEST(Cli, ParamsCheckOnExample) {
    const auto r = call(example("params-check"));
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = r.doc();
    EXPECT_EQ(j["c"], "b");
    EXPECT_EQ(j["cd"], "3f7");
    EXPECT_EQ(j["gterm"], "ca");
    EXPECT_TRUE(j["c_nonsquare"]);
    EXPECT_TRUE(j["cd_nonsquare"]);
    EXPECT_TRUE(j["gterm_nonsquare"]);
    EXPECT_TRUE(j["universal"]);
    EXPECT_EQ(io::params(io::parse_params<Fp>(j["params"])), j["params"]);
}

TEST(Cli, ParamsCheckFromAbcHasNoGterm) {
    const auto p = testsupport::example_params();
    const auto r = call({"params-check", "--p", "1201", "--a", std::to_string(p.a.integer().get_ui()), "--b", "7",
                         "--c", "11"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_FALSE(r.doc().contains("gterm"));
    EXPECT_EQ(r.doc()["cd"], "3f7");
}

TEST(Cli, TextFormat) {
    auto args = example("params-check", {"--format", "text"});
    const auto r = call(args);
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("cd: 1015"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("gterm: 202"), std::string::npos) << r.out;
}

TEST(Cli, PointArithmetic) {
    const auto& S = testsupport::example_model();
    const PrimeField k = S.params().field;

    const auto pts = call(example("point-random", {"--seed", "7", "--count", "3"}));
    ASSERT_EQ(pts.code, 0) << pts.err;
    ASSERT_EQ(pts.doc()["points"].size(), 3u);
    const json P = pts.doc()["points"][0], Q = pts.doc()["points"][1];
    const auto Pm = io::parse_model_point<Fp>(k, P), Qm = io::parse_model_point<Fp>(k, Q);
    EXPECT_TRUE(S.is_member(Pm));
    EXPECT_EQ(call(example("point-random", {"--seed", "7", "--count", "3"})).out, pts.out);

    const auto id = call(example("add", {"--P", P.dump(), "--Q", "identity"}));
    ASSERT_EQ(id.code, 0) << id.err;
    EXPECT_EQ(id.doc(), P);

    for (const std::string strategy : {"universal", "first", "columns:1,1"}) {
        const auto sum = call(example("add", {"--P", P.dump(), "--Q", Q.dump(), "--strategy", strategy}));
        if (sum.code == 3) {
            EXPECT_EQ(sum.doc()["error"], "DegenerateColumn");
            continue;
        }
        ASSERT_EQ(sum.code, 0) << sum.err;
        EXPECT_TRUE(model_equal(io::parse_model_point<Fp>(k, sum.doc()), S.add(Pm, Qm)));
    }

    const auto dbl = call(example("double", {"--P", P.dump()}));
    ASSERT_EQ(dbl.code, 0);
    EXPECT_TRUE(model_equal(io::parse_model_point<Fp>(k, dbl.doc()), S.dbl(Pm)));

    const auto four = call(example("mul", {"--k", "4", "--P", "d1"}));
    ASSERT_EQ(four.code, 0);
    EXPECT_EQ(four.doc(), io::model_point(S.identity()));
    const auto neg = call(example("mul", {"--k", "-1", "--P", P.dump()}));
    ASSERT_EQ(neg.code, 0);
    EXPECT_TRUE(model_equal(S.add(io::parse_model_point<Fp>(k, neg.doc()), Pm), S.identity()));
}

TEST(Cli, Verify) {
    const auto good = call(example("verify", {"--P", "d1"}));
    ASSERT_EQ(good.code, 0);
    EXPECT_EQ(good.doc()["residuals"].size(), 15u);
    EXPECT_TRUE(good.doc()["member"]);
    for (const auto& r : good.doc()["residuals"]) EXPECT_EQ(r, "0");

    const json bogus{{"u", {"1", "2", "3", "4"}}, {"y", {"5", "6", "7", "8"}}};
    const auto bad = call(example("verify", {"--P", bogus.dump()}));
    ASSERT_EQ(bad.code, 0);
    EXPECT_FALSE(bad.doc()["member"]);
}

TEST(Cli, LiftFromKummer) {
    const auto& S = testsupport::example_model();
    const PrimeField k = S.params().field;
    Rng rng(70);
    const auto D = S.curve().random_divisor(rng);
    const json L = io::kummer_point(S.kummer().from_mumford(D));
    const auto r = call(example("lift", {"--L", L.dump()}));
    ASSERT_EQ(r.code, 0) << r.err;
    const auto pts = r.doc()["points"];
    ASSERT_EQ(pts.size(), 2u);
    const auto A = io::parse_model_point<Fp>(k, pts[0]), B = io::parse_model_point<Fp>(k, pts[1]);
    const auto P = S.embed(D), N = S.embed(S.curve().neg(D));
    EXPECT_TRUE((model_equal(A, P) && model_equal(B, N)) || (model_equal(A, N) && model_equal(B, P)));
}

TEST(Cli, BenchCountsAreDeterministic) {
    const auto a = call(example("bench", {"--count", "50", "--seed", "3"}));
    const auto b = call(example("bench", {"--count", "50", "--seed", "3"}));
    ASSERT_EQ(a.code, 0) << a.err;
    const auto rows = a.doc()["bench"];
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0]["strategy"], "first");
    EXPECT_EQ(rows[1]["strategy"], "universal");
    EXPECT_EQ(rows[1]["degenerate"], 0);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(rows[i]["additions"], 50);
        EXPECT_EQ(rows[i]["field_muls"], b.doc()["bench"][i]["field_muls"]);
        EXPECT_GT(rows[i]["field_muls"].get<std::uint64_t>(), 0u);
    }
}

TEST(Cli, ParamsSearch) {
    const auto r = call({"params-search", "--p", "101", "--method", "random", "--budget", "2000", "--seed", "1",
                         "--count", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = r.doc();
    EXPECT_LE(j["found"].size(), 2u);
    const PrimeField k(101);
    for (const auto& f : j["found"]) {
        const auto p = params_from_frak(io::parse_element<Fp>(k, f["frak_a"]), io::parse_element<Fp>(k, f["b"]),
                                        io::parse_element<Fp>(k, f["c"]));
        EXPECT_TRUE(universality_report(p).universal());
    }
}

TEST(Cli, EdwardsVerbs) {
    const auto pts = call({"edwards-random", "--p", "1009", "--d", "11", "--count", "2", "--seed", "5"});
    ASSERT_EQ(pts.code, 0) << pts.err;
    const json P = pts.doc()["points"][0], Q = pts.doc()["points"][1];
    const auto sum = call({"edwards-add", "--p", "1009", "--d", "11", "--P", P.dump(), "--Q", Q.dump(), "--strategy",
                           "universal"});
    ASSERT_EQ(sum.code, 0) << sum.err;
    const auto v = call({"edwards-verify", "--p", "1009", "--d", "11", "--P", sum.doc().dump()});
    ASSERT_EQ(v.code, 0);
    EXPECT_TRUE(v.doc()["member"]);
    EXPECT_EQ(v.doc()["residual"], "0");
}

TEST(Cli, ExitCodes) {
    const auto missing = call({"add", "--p", "1201"});
    EXPECT_EQ(missing.code, 2);
    EXPECT_TRUE(missing.doc().contains("error"));

    const auto unknown = call({"frobnicate"});
    EXPECT_EQ(unknown.code, 2);

    const auto garbage = call(example("add", {"--P", "{not json", "--Q", "identity"}));
    EXPECT_EQ(garbage.code, 2);
    EXPECT_EQ(garbage.doc()["error"], "ParseError");

    const auto composite = call({"params-check", "--p", "1200", "--frak-a", "6", "--b", "7", "--c", "11"});
    EXPECT_EQ(composite.code, 3);
    EXPECT_EQ(composite.doc()["error"], "NotPrime");
    EXPECT_FALSE(composite.err.empty());

    const json bogus{{"u", {"1", "2", "3", "4"}}, {"y", {"5", "6", "7", "8"}}};
    const auto off_model = call(example("add", {"--P", bogus.dump(), "--Q", "identity"}));
    EXPECT_EQ(off_model.code, 3);
    EXPECT_EQ(off_model.doc()["error"], "InvalidPoint");

    const auto square_c = call({"add", "--p", "1201", "--frak-a", "6", "--b", "7", "--c", "4", "--P", "d1", "--Q",
                                "d1", "--strategy", "universal"});
    EXPECT_EQ(square_c.code, 3);
}
