#include "webvec/service/explorer.hpp"

#include "webvec/error.hpp"
#include "webvec/query/ops.hpp"

#include <httplib.h>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <iostream>

namespace webvec::service {

namespace {

using nlohmann::json;

constexpr std::size_t kDefaultNeighbors = 10;
constexpr std::size_t kDefaultAnalogies = 5;
constexpr std::size_t kMaxResults = 100;

/// Signals a 4xx response from deep inside a handler.
struct HttpError {
    int status;
    json body;
};

[[noreturn]] void bad_request(const std::string& message) { throw HttpError{400, {{"error", message}}}; }

Response ok(const json& body) { return {200, body.dump()}; }

std::optional<std::string> param(const Params& params, const std::string& name) {
    const auto it = params.find(name);
    if (it == params.end()) return std::nullopt;
    return it->second;
}

std::string required(const Params& params, const std::string& name) {
    auto value = param(params, name);
    if (!value || value->empty()) bad_request("missing parameter: " + name);
    return *value;
}

std::size_t integer(const Params& params, const std::string& name, std::size_t fallback, std::size_t lo,
                    std::size_t hi) {
    const auto text = param(params, name);
    if (!text) return fallback;
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
    if (ec != std::errc() || ptr != text->data() + text->size() || text->empty())
        bad_request("parameter " + name + " must be an integer");
    if (value < lo || value > hi)
        bad_request("parameter " + name + " must lie in " + std::to_string(lo) + ".." + std::to_string(hi));
    return value;
}

json results_json(const std::vector<query::QueryResult>& results) {
    json out = json::array();
    for (const auto& r : results) out.push_back({{"word", r.word}, {"score", r.score}});
    return out;
}

double round6(double v) { return std::round(v * 1e6) / 1e6; }

/// Maps library exceptions onto the JSON error contract.
template <typename Fn>
Response guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const HttpError& e) {
        return {e.status, e.body.dump()};
    } catch (const UnknownWordError& e) {
        return {404, json{{"error", e.what()}, {"word", e.word()}}.dump()};
    } catch (const NoSignalError& e) {
        return {404, json{{"error", e.what()}, {"word", e.token()}}.dump()};
    } catch (const UndefinedSimilarityError& e) {
        return {400, json{{"error", e.what()}}.dump()};
    } catch (const UsageError& e) {
        return {400, json{{"error", e.what()}}.dump()};
    } catch (const json::exception& e) {
        return {400, json{{"error", std::string("malformed JSON: ") + e.what()}}.dump()};
    } catch (const std::exception& e) {
        return {500, json{{"error", e.what()}}.dump()};
    }
}

Params to_params(const httplib::Request& req) { return {req.params.begin(), req.params.end()}; }

bool local_origin(const std::string& origin) {
    for (const char* prefix : {"http://localhost", "http://127.0.0.1", "https://localhost", "https://127.0.0.1"}) {
        const std::string p(prefix);
        if (origin.compare(0, p.size(), p) == 0 &&
            (origin.size() == p.size() || origin[p.size()] == ':' || origin[p.size()] == '/'))
            return true;
    }
    return false;
}

}  // namespace

std::pair<std::string, int> parse_bind(const std::string& bind) {
    const auto colon = bind.rfind(':');
    if (colon == std::string::npos || colon == 0) throw UsageError("bind address must be host:port");
    int port = 0;
    const char* begin = bind.data() + colon + 1;
    const char* end = bind.data() + bind.size();
    const auto [ptr, ec] = std::from_chars(begin, end, port);
    if (ec != std::errc() || ptr != end || port < 0 || port > 65535)
        throw UsageError("bad port in bind address: " + bind);
    return {bind.substr(0, colon), port};
}

ExplorerService::ExplorerService(std::shared_ptr<const query::EmbeddingStore> store, ServiceConfig config)
    : store_(std::move(store)), config_(std::move(config)) {
    if (!store_) throw UsageError("ExplorerService needs a store");
}

Response ExplorerService::similarity(const Params& params) const {
    return guarded([&] {
        const std::string w1 = required(params, "w1");
        const std::string w2 = required(params, "w2");
        const auto v1 = store_->resolve(w1);
        const auto v2 = store_->resolve(w2);
        const double score = query::cosine(std::span<const double>(v1), std::span<const double>(v2));
        return ok({{"w1", w1}, {"w2", w2}, {"score", round6(score)}});
    });
}

Response ExplorerService::most_similar(const Params& params) const {
    return guarded([&] {
        const std::string w = required(params, "w");
        const std::size_t k = integer(params, "k", kDefaultNeighbors, 1, kMaxResults);
        return ok({{"w", w}, {"neighbors", results_json(query::most_similar(*store_, w, k))}});
    });
}

Response ExplorerService::analogy(const Params& params) const {
    return guarded([&] {
        const std::string a = required(params, "a");
        const std::string b = required(params, "b");
        const std::string c = required(params, "c");
        const std::size_t k = integer(params, "k", kDefaultAnalogies, 1, kMaxResults);
        return ok({{"query", {{"a", a}, {"b", b}, {"c", c}}},
                   {"results", results_json(query::analogy(*store_, a, b, c, k))}});
    });
}

Response ExplorerService::compare(const std::string& body) const {
    return guarded([&] {
        const json request = json::parse(body);
        const auto group = [&](const char* name) {
            if (!request.is_object() || !request.contains(name) || !request[name].is_array())
                bad_request(std::string("body needs an array field ") + name);
            std::vector<std::string> words;
            for (const auto& item : request[name]) {
                if (!item.is_string() || item.get<std::string>().empty())
                    bad_request(std::string(name) + " must hold nonempty strings");
                words.push_back(item.get<std::string>());
            }
            if (words.empty()) bad_request(std::string(name) + " must not be empty");
            return words;
        };
        const auto g1 = group("group1");
        const auto g2 = group("group2");
        return ok({{"score", query::compare_groups(*store_, g1, g2)}});
    });
}

Response ExplorerService::map(const Params& params) {
    return guarded([&] {
        if (store_->size() < 2) bad_request("the store holds fewer than two words");
        const std::size_t n = std::min(
            integer(params, "n", std::min(config_.sample_size, config_.max_sample), 2, config_.max_sample),
            store_->size());
        const std::size_t k = integer(params, "k", std::min(config_.k_clusters, n), 1, n);
        const std::uint64_t seed = integer(params, "seed", config_.seed, 0, std::numeric_limits<std::uint32_t>::max());

        std::lock_guard guard(map_mutex_);
        const auto key = std::make_tuple(n, k, seed);
        if (const auto it = map_cache_.find(key); it != map_cache_.end()) return Response{200, it->second};

        viz::ProjectionConfig cfg = config_.projection;
        cfg.sample_size = n;
        cfg.seed = seed;
        const viz::MapResult result = viz::build_map(*store_, k, cfg);
        json points = json::array();
        for (const auto& p : result.points)
            points.push_back({{"word", p.word}, {"x", p.x}, {"y", p.y}, {"cluster", p.cluster}});
        std::string body = json{{"points", std::move(points)}, {"kl", result.kl}}.dump();
        map_cache_.emplace(key, body);
        return Response{200, std::move(body)};
    });
}

Response ExplorerService::info() const {
    return ok({{"vocab_size", store_->size()}, {"dim", store_->dim()}, {"mode", store_->mode()}});
}

void ExplorerService::mount(httplib::Server& server) {
    const auto reply = [](httplib::Response& res, const Response& r) {
        res.status = r.status;
        res.set_content(r.body, "application/json; charset=utf-8");
    };
    server.Get("/api/similarity", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, similarity(to_params(req)));
    });
    server.Get("/api/most_similar", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, most_similar(to_params(req)));
    });
    server.Get("/api/analogy", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, analogy(to_params(req)));
    });
    server.Post("/api/compare", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, compare(req.body));
    });
    server.Get("/api/map", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, map(to_params(req)));
    });
    server.Get("/api/info", [this, reply](const httplib::Request&, httplib::Response& res) { reply(res, info()); });
    server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server.set_post_routing_handler([](const httplib::Request& req, httplib::Response& res) {
        const std::string origin = req.get_header_value("Origin");
        if (!origin.empty() && local_origin(origin)) {
            res.set_header("Access-Control-Allow-Origin", origin);
            res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
            res.set_header("Access-Control-Allow-Headers", "Content-Type");
            res.set_header("Vary", "Origin");
        }
    });

    if (config_.static_dir && std::filesystem::is_directory(*config_.static_dir)) {
        server.set_mount_point("/", config_.static_dir->string());
    } else if (config_.static_dir) {
        std::clog << "warning: static directory " << *config_.static_dir << " not found; serving the API only\n";
    }
}

void ExplorerService::serve() {
    httplib::Server server;
    mount(server);
    if (!server.listen(config_.host, config_.port))
        throw IoError("cannot listen on " + config_.host + ":" + std::to_string(config_.port));
}

}  // namespace webvec::service
