#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include <json.hpp>

#include "nccut/config.hpp"
#include "nccut/pipeline.hpp"
#include "nccut/png_io.hpp"

namespace nccut {

class SessionNotFound : public Error {
public:
    using Error::Error;
};

class PayloadTooLarge : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

/// Last committed state of a session; immutable once published.
struct SessionSnapshot {
    bool segmented = false;
    Bytes mask_png;
    Bytes ncmap_png;
    nlohmann::json payload;    ///< segment/edit response body
    nlohmann::json candidates;
};

struct StoreOptions {
    Config config;
    std::size_t max_pixels = 16'000'000;
    std::chrono::seconds idle_timeout{30 * 60};
};

/// Sessions keyed by opaque random ids. Mutations of one session are
/// serialized with try-lock semantics; readers get the last published
/// snapshot without waiting.
class SessionStore {
public:
    struct Entry;

    /// Holds the mutation right for one session.
    struct MutationGuard {
        std::shared_ptr<Entry> entry;
        std::unique_lock<std::mutex> lock;
    };

    explicit SessionStore(StoreOptions options = {});

    /// Builds superpixels and the region graph; throws PayloadTooLarge.
    std::string create(RgbImage image);

    std::shared_ptr<const PreparedImage> prepared(const std::string& id);
    std::shared_ptr<const SessionSnapshot> snapshot(const std::string& id);

    /// Empty when another mutation is in flight; throws SessionNotFound.
    std::optional<MutationGuard> try_mutate(const std::string& id);

    /// Starts a fresh segmentation; the guard must come from try_mutate.
    std::shared_ptr<const SessionSnapshot> segment(MutationGuard& guard, Polygon roi, bool nc_cut0);
    std::shared_ptr<const SessionSnapshot> edit(MutationGuard& guard, std::span<const Stroke> strokes);

    bool erase(const std::string& id);
    std::size_t size() const;
    /// Drops sessions idle longer than the timeout; returns how many.
    std::size_t expire();

    const StoreOptions& options() const noexcept { return options_; }

private:
    std::shared_ptr<Entry> find(const std::string& id);
    std::string new_id();

    StoreOptions options_;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, std::shared_ptr<Entry>> sessions_;
    std::uint64_t counter_ = 0;
    std::uint64_t salt_ = 0;
};

struct ServiceOptions {
    StoreOptions store;
    std::optional<std::filesystem::path> static_dir;
};

/// HTTP front end over a SessionStore.
class Service {
public:
    explicit Service(ServiceOptions options);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    SessionStore& store() noexcept;

    /// Blocks until stop(); returns false when the address cannot be bound.
    bool listen(const std::string& host, int port);
    /// Binds to a free port and returns it (or -1); serve with listen_after_bind.
    int bind_any_port(const std::string& host);
    bool listen_after_bind();
    void wait_until_ready() const;
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace nccut
