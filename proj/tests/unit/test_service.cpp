#include "support.hpp"

#include "webvec/error.hpp"
#include "webvec/query/ops.hpp"
#include "webvec/service/explorer.hpp"
#include "webvec/viz/map.hpp"

#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include <future>
#include <thread>

using namespace webvec;
using nlohmann::json;

namespace {

std::shared_ptr<const query::EmbeddingStore> fixture_store(std::size_t n = 30, std::size_t dim = 5) {
    std::mt19937_64 rng(81);
    std::normal_distribution<float> N;
    embed::WordVectors v;
    v.dim = dim;
    for (std::size_t i = 0; i < n; ++i) v.words.push_back("λ" + std::to_string(i));
    for (std::size_t i = 0; i < n * dim; ++i) v.data.push_back(N(rng));
    return std::make_shared<const query::EmbeddingStore>(std::move(v));
}

std::shared_ptr<const query::EmbeddingStore> tiny_store() {
    embed::WordVectors v;
    v.dim = 2;
    v.words = {"α", "β", "γ"};
    v.data = {1, 0, 0.6f, 0.8f, 0, 1};
    return std::make_shared<const query::EmbeddingStore>(std::move(v));
}

json results(const std::vector<query::QueryResult>& rs) {
    json out = json::array();
    for (const auto& r : rs) out.push_back({{"word", r.word}, {"score", r.score}});
    return out;
}

service::ServiceConfig fast_config() {
    service::ServiceConfig c;
    c.sample_size = 20;
    c.projection.iterations = 300;
    return c;
}

}  // namespace

TEST_SUITE("service") {

TEST_CASE("info") {
    service::ExplorerService svc(tiny_store(), {});
    const auto r = svc.info();
    CHECK(r.status == 200);
    CHECK(json::parse(r.body) == json{{"vocab_size", 3}, {"dim", 2}, {"mode", "vectors"}});
    CHECK(svc.info().body == r.body);
}

TEST_CASE("similarity") {
    service::ExplorerService svc(tiny_store(), {});
    auto r = svc.similarity({{"w1", "α"}, {"w2", "α"}});
    CHECK(r.status == 200);
    CHECK(json::parse(r.body)["score"] == 1.0);
    r = svc.similarity({{"w1", "α"}, {"w2", "β"}});
    const auto body = json::parse(r.body);
    CHECK(body["w1"] == "α");
    CHECK(body["w2"] == "β");
    CHECK(body["score"].get<double>() == 0.6);

    r = svc.similarity({{"w1", "α"}});
    CHECK(r.status == 400);
    CHECK(json::parse(r.body).contains("error"));
    r = svc.similarity({{"w1", "α"}, {"w2", "ω"}});
    CHECK(r.status == 404);
    CHECK(json::parse(r.body)["word"] == "ω");
}

TEST_CASE("most_similar mirrors the library") {
    const auto store = fixture_store();
    service::ExplorerService svc(store, {});
    const auto r = svc.most_similar({{"w", "λ3"}, {"k", "7"}});
    REQUIRE(r.status == 200);
    const auto body = json::parse(r.body);
    CHECK(body["w"] == "λ3");
    CHECK(body["neighbors"] == results(query::most_similar(*store, "λ3", 7)));
    CHECK(json::parse(svc.most_similar({{"w", "λ3"}}).body)["neighbors"].size() == 10);
    CHECK(json::parse(svc.most_similar({{"w", "λ3"}, {"k", "100"}}).body)["neighbors"].size() == 29);
    for (const char* bad : {"0", "101", "-1", "x", "2.5", ""})
        CHECK(svc.most_similar({{"w", "λ3"}, {"k", bad}}).status == 400);
    CHECK(svc.most_similar({{"w", "nope"}}).status == 404);
    CHECK(svc.most_similar({}).status == 400);
}

TEST_CASE("analogy mirrors the library") {
    const auto store = fixture_store();
    service::ExplorerService svc(store, {});
    const auto r = svc.analogy({{"a", "λ1"}, {"b", "λ2"}, {"c", "λ3"}, {"k", "4"}});
    REQUIRE(r.status == 200);
    const auto body = json::parse(r.body);
    CHECK(body["query"] == json{{"a", "λ1"}, {"b", "λ2"}, {"c", "λ3"}});
    CHECK(body["results"] == results(query::analogy(*store, "λ1", "λ2", "λ3", 4)));

    const auto same = json::parse(svc.analogy({{"a", "λ1"}, {"b", "λ1"}, {"c", "λ3"}, {"k", "10"}}).body);
    const auto neigh = json::parse(svc.most_similar({{"w", "λ3"}, {"k", "11"}}).body)["neighbors"];
    json expected = json::array();
    for (const auto& n : neigh)
        if (n["word"] != "λ1" && expected.size() < 10) expected.push_back(n);
    CHECK(same["results"] == expected);

    CHECK(svc.analogy({{"a", "λ1"}, {"b", "λ2"}}).status == 400);
    const auto missing = svc.analogy({{"a", "λ1"}, {"b", "x1"}, {"c", "x2"}});
    CHECK(missing.status == 404);
    CHECK(json::parse(missing.body)["word"] == "x1");
}

TEST_CASE("compare") {
    const auto store = fixture_store();
    service::ExplorerService svc(store, {});
    const auto r = svc.compare(R"({"group1":["λ1","λ2"],"group2":["λ5"]})");
    REQUIRE(r.status == 200);
    const std::vector<std::string> g1 = {"λ1", "λ2"}, g2 = {"λ5"};
    CHECK(json::parse(r.body)["score"].get<double>() == query::compare_groups(*store, g1, g2));
    CHECK(svc.compare("{not json").status == 400);
    CHECK(svc.compare(R"({"group1":[],"group2":["λ5"]})").status == 400);
    CHECK(svc.compare(R"({"group1":["λ1"]})").status == 400);
    CHECK(svc.compare(R"({"group1":[1],"group2":["λ5"]})").status == 400);
    CHECK(svc.compare(R"([1,2])").status == 400);
    const auto unknown = svc.compare(R"({"group1":["λ1"],"group2":["zz"]})");
    CHECK(unknown.status == 404);
    CHECK(json::parse(unknown.body)["word"] == "zz");
}

TEST_CASE("map mirrors build_map and is cached byte for byte") {
    const auto store = fixture_store();
    service::ExplorerService svc(store, fast_config());
    const auto r = svc.map({{"n", "10"}, {"k", "2"}});
    REQUIRE(r.status == 200);
    viz::ProjectionConfig pc = fast_config().projection;
    pc.sample_size = 10;
    const auto direct = viz::build_map(*store, 2, pc);
    const auto body = json::parse(r.body);
    REQUIRE(body["points"].size() == 10);
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(body["points"][i]["word"] == direct.points[i].word);
        CHECK(body["points"][i]["x"].get<double>() == direct.points[i].x);
        CHECK(body["points"][i]["y"].get<double>() == direct.points[i].y);
        CHECK(body["points"][i]["cluster"].get<std::size_t>() == direct.points[i].cluster);
    }
    CHECK(body["kl"].get<double>() == direct.kl);
    CHECK(svc.map({{"n", "10"}, {"k", "2"}}).body == r.body);

    const auto defaults = json::parse(svc.map({}).body);
    CHECK(defaults["points"].size() == 20);
    for (const auto& p : defaults["points"]) CHECK(p["cluster"].get<std::size_t>() < 10);

    CHECK(svc.map({{"n", "1"}}).status == 400);
    CHECK(svc.map({{"n", "1001"}}).status == 400);
    CHECK(svc.map({{"n", "10"}, {"k", "11"}}).status == 400);
    CHECK(svc.map({{"n", "10"}, {"k", "0"}}).status == 400);
    CHECK(json::parse(svc.map({{"n", "1000"}, {"k", "3"}}).body)["points"].size() == 30);  // clamped to |V|
}

TEST_CASE("concurrent mixed requests equal serial ones") {
    const auto store = fixture_store();
    service::ExplorerService svc(store, fast_config());
    const auto serial_sim = svc.similarity({{"w1", "λ1"}, {"w2", "λ9"}}).body;
    const auto serial_ms = svc.most_similar({{"w", "λ4"}}).body;
    const auto serial_map = svc.map({{"n", "12"}, {"k", "3"}}).body;
    std::vector<std::future<bool>> jobs;
    for (int t = 0; t < 8; ++t) {
        jobs.push_back(std::async(std::launch::async, [&, t] {
            bool ok = true;
            for (int i = 0; i < 20; ++i) {
                ok &= svc.similarity({{"w1", "λ1"}, {"w2", "λ9"}}).body == serial_sim;
                ok &= svc.most_similar({{"w", "λ4"}}).body == serial_ms;
                if (i % 5 == t % 5) ok &= svc.map({{"n", "12"}, {"k", "3"}}).body == serial_map;
            }
            return ok;
        }));
    }
    for (auto& j : jobs) CHECK(j.get());
}

TEST_CASE("http round trip without UI assets") {
    const auto store = tiny_store();
    service::ServiceConfig cfg;
    cfg.static_dir = test_support::fixture_dir() / "no-such-ui-directory";
    service::ExplorerService svc(store, cfg);
    httplib::Server server;
    svc.mount(server);
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread runner([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    auto res = client.Get("/api/info");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->body == svc.info().body);
    CHECK(res->get_header_value("Content-Type").find("application/json") == 0);

    res = client.Get("/api/similarity?w1=%CE%B1&w2=%CE%B2");
    REQUIRE(res);
    CHECK(res->body == svc.similarity({{"w1", "α"}, {"w2", "β"}}).body);

    res = client.Post("/api/compare", R"({"group1":["α"],"group2":["γ"]})", "application/json");
    REQUIRE(res);
    CHECK(res->status == 200);

    res = client.Get("/api/most_similar?w=%CE%B1&k=0");
    REQUIRE(res);
    CHECK(res->status == 400);

    res = client.Get("/api/info", {{"Origin", "http://localhost:5173"}});
    REQUIRE(res);
    CHECK(res->get_header_value("Access-Control-Allow-Origin") == "http://localhost:5173");
    res = client.Get("/api/info", {{"Origin", "http://evil.example"}});
    REQUIRE(res);
    CHECK_FALSE(res->has_header("Access-Control-Allow-Origin"));

    res = client.Get("/");
    REQUIRE(res);
    CHECK(res->status == 404);

    server.stop();
    runner.join();
}

TEST_CASE("static directory is served at the root") {
    test_support::TempDir ui;
    std::ofstream(ui / "index.html") << "<h1>ui</h1>";
    service::ServiceConfig cfg;
    cfg.static_dir = ui.path();
    service::ExplorerService svc(tiny_store(), cfg);
    httplib::Server server;
    svc.mount(server);
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread runner([&] { server.listen_after_bind(); });
    server.wait_until_ready();
    httplib::Client client("127.0.0.1", port);
    auto res = client.Get("/index.html");
    REQUIRE(res);
    CHECK(res->body == "<h1>ui</h1>");
    res = client.Get("/api/info");
    REQUIRE(res);
    CHECK(res->status == 200);
    server.stop();
    runner.join();
}

TEST_CASE("bind parsing") {
    CHECK(service::parse_bind("127.0.0.1:7000") == std::pair<std::string, int>{"127.0.0.1", 7000});
    CHECK(service::parse_bind("[::1]:80") == std::pair<std::string, int>{"[::1]", 80});
    CHECK_THROWS_AS(service::parse_bind("localhost"), UsageError);
    CHECK_THROWS_AS(service::parse_bind("h:99999"), UsageError);
}

}
