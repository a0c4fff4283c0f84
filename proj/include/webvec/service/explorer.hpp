#pragma once

#include "webvec/query/store.hpp"
#include "webvec/viz/map.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>

namespace httplib {
class Server;
}

namespace webvec::service {

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 7000;
    std::optional<std::filesystem::path> static_dir;
    std::size_t sample_size = 500;  ///< default n for /api/map
    std::size_t max_sample = 1000;
    std::size_t k_clusters = viz::kDefaultClusters;
    std::uint64_t seed = 0;
    viz::ProjectionConfig projection;  ///< sample_size and seed are taken per request
};

/// "host:port" into host and port; throws UsageError when malformed.
std::pair<std::string, int> parse_bind(const std::string& bind);

struct Response {
    int status = 200;
    std::string body;  ///< JSON
};

using Params = std::multimap<std::string, std::string>;

/// JSON facade over one immutable store. Handlers are plain functions of the
/// request so they can be exercised without a socket; mount() wires them to
/// an HTTP server.
class ExplorerService {
public:
    ExplorerService(std::shared_ptr<const query::EmbeddingStore> store, ServiceConfig config);

    Response similarity(const Params& params) const;
    Response most_similar(const Params& params) const;
    Response analogy(const Params& params) const;
    Response compare(const std::string& body) const;
    Response map(const Params& params);
    Response info() const;

    /// Registers the /api routes, CORS handling and (if configured) static files.
    void mount(httplib::Server& server);

    /// Binds to config().host:config().port and blocks.
    void serve();

    const ServiceConfig& config() const noexcept { return config_; }
    const query::EmbeddingStore& store() const noexcept { return *store_; }

private:
    std::shared_ptr<const query::EmbeddingStore> store_;
    ServiceConfig config_;
    std::mutex map_mutex_;
    std::map<std::tuple<std::size_t, std::size_t, std::uint64_t>, std::string> map_cache_;
};

}  // namespace webvec::service
