#include "nccut/service.hpp"

#include <cstdio>
#include <random>

#include <httplib.h>

#include "nccut/export.hpp"
#include "nccut/roi_io.hpp"

namespace nccut {

struct SessionStore::Entry {
    std::mutex mutation;
    std::shared_ptr<const PreparedImage> prepared;
    std::optional<SegSession> session; ///< touched only under `mutation`

    std::mutex state; ///< guards the two fields below
    std::shared_ptr<const SessionSnapshot> snapshot;
    std::chrono::steady_clock::time_point last_access;
};

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t splitmix(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void touch(SessionStore::Entry& e)
{
    std::lock_guard lock(e.state);
    e.last_access = Clock::now();
}

std::shared_ptr<const SessionSnapshot> publish(SessionStore::Entry& e, const SegSession& s, const SegmentResult& r)
{
    auto snap = std::make_shared<SessionSnapshot>();
    snap->segmented = true;
    snap->mask_png = encode_mask_png(r.mask);
    snap->ncmap_png = encode_png(truth_map(s.regions, s.nc));
    snap->payload = segment_payload(r, s.config.max_iterations);
    snap->candidates = candidates_json(s.candidates, s.forest);
    std::lock_guard lock(e.state);
    e.snapshot = snap;
    e.last_access = Clock::now();
    return snap;
}

// Dimensions from the IHDR chunk, so oversized uploads are refused before decoding.
std::optional<std::pair<std::uint32_t, std::uint32_t>> png_dimensions(const std::string& body)
{
    if (body.size() < 24 || body.compare(12, 4, "IHDR") != 0)
        return std::nullopt;
    auto be32 = [&](std::size_t at) {
        std::uint32_t v = 0;
        for (std::size_t k = 0; k < 4; ++k)
            v = (v << 8) | static_cast<std::uint8_t>(body[at + k]);
        return v;
    };
    return std::pair{be32(16), be32(20)};
}

Polygon polygon_from(const nlohmann::json& j)
{
    if (!j.is_object() || !j.contains("polygon"))
        throw InvalidRoi("request needs a polygon");
    return parse_polygon_json(j.dump());
}

std::vector<Stroke> strokes_from(const nlohmann::json& j)
{
    if (!j.is_object() || !j.contains("strokes") || !j["strokes"].is_array())
        throw InvalidInput("request needs a strokes array");
    std::vector<Stroke> out;
    for (const auto& s : j["strokes"]) {
        if (!s.is_object() || !s.contains("path") || !s["path"].is_array() || !s.contains("label"))
            throw InvalidInput("stroke needs a path and a label");
        const auto& label = s["label"];
        if (!label.is_number_integer() || (label.get<int>() != 0 && label.get<int>() != 1))
            throw InvalidInput("stroke label must be 0 or 1");
        Stroke stroke;
        stroke.label = static_cast<std::uint8_t>(label.get<int>());
        for (const auto& p : s["path"]) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
                throw InvalidInput("stroke point must be [x, y]");
            stroke.path.push_back(Point{p[0].get<double>(), p[1].get<double>()});
        }
        out.push_back(std::move(stroke));
    }
    return out;
}

void send_json(httplib::Response& res, const nlohmann::json& j, int status = 200)
{
    res.status = status;
    res.set_content(j.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message)
{
    send_json(res, {{"error", message}}, status);
}

void send_png(httplib::Response& res, const Bytes& png)
{
    res.set_content(std::string(png.begin(), png.end()), "image/png");
}

template <class F>
void guarded(httplib::Response& res, F&& f)
{
    try {
        f();
    } catch (const SessionNotFound& e) {
        send_error(res, 404, e.what());
    } catch (const PayloadTooLarge& e) {
        send_error(res, 413, e.what());
    } catch (const nlohmann::json::exception& e) {
        send_error(res, 400, std::string("malformed JSON: ") + e.what());
    } catch (const InvalidInput& e) {
        send_error(res, 400, e.what());
    } catch (const DecodeError& e) {
        send_error(res, 400, e.what());
    } catch (const std::exception& e) {
        send_error(res, 500, e.what());
    }
}

} // namespace

SessionStore::SessionStore(StoreOptions options) : options_(std::move(options))
{
    options_.config.validate();
    salt_ = (std::uint64_t(std::random_device{}()) << 32) ^ std::random_device{}();
}

std::string SessionStore::new_id()
{
    std::lock_guard lock(mutex_);
    const std::uint64_t n = ++counter_;
    char buf[33];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(splitmix(salt_ ^ n)),
                  static_cast<unsigned long long>(splitmix(salt_ + 2 * n + 1)));
    return buf;
}

std::string SessionStore::create(RgbImage image)
{
    if (image.size() > options_.max_pixels)
        throw PayloadTooLarge("image has " + std::to_string(image.size()) + " pixels, limit is " +
                              std::to_string(options_.max_pixels));
    expire();
    auto entry = std::make_shared<Entry>();
    entry->prepared = std::make_shared<const PreparedImage>(prepare_regions(std::move(image), options_.config));
    entry->snapshot = std::make_shared<const SessionSnapshot>();
    entry->last_access = Clock::now();
    std::string id = new_id();
    std::lock_guard lock(mutex_);
    sessions_.emplace(id, std::move(entry));
    return id;
}

std::shared_ptr<SessionStore::Entry> SessionStore::find(const std::string& id)
{
    std::shared_ptr<Entry> e;
    {
        std::lock_guard lock(mutex_);
        const auto it = sessions_.find(id);
        if (it != sessions_.end())
            e = it->second;
    }
    if (!e)
        throw SessionNotFound("unknown session '" + id + "'");
    touch(*e);
    return e;
}

std::shared_ptr<const PreparedImage> SessionStore::prepared(const std::string& id)
{
    return find(id)->prepared;
}

std::shared_ptr<const SessionSnapshot> SessionStore::snapshot(const std::string& id)
{
    auto e = find(id);
    std::lock_guard lock(e->state);
    return e->snapshot;
}

std::optional<SessionStore::MutationGuard> SessionStore::try_mutate(const std::string& id)
{
    auto e = find(id);
    std::unique_lock lock(e->mutation, std::try_to_lock);
    if (!lock.owns_lock())
        return std::nullopt;
    return MutationGuard{std::move(e), std::move(lock)};
}

std::shared_ptr<const SessionSnapshot> SessionStore::segment(MutationGuard& guard, Polygon roi, bool nc_cut0)
{
    Entry& e = *guard.entry;
    Config cfg = options_.config;
    if (nc_cut0)
        cfg.indeterminacy_enabled = false;
    SegSession s = init_session(PreparedImage(*e.prepared), std::move(roi), cfg);
    const SegmentResult r = nccut::segment(s);
    e.session = std::move(s);
    return publish(e, *e.session, r);
}

std::shared_ptr<const SessionSnapshot> SessionStore::edit(MutationGuard& guard, std::span<const Stroke> strokes)
{
    Entry& e = *guard.entry;
    if (!e.session || !e.session->segmented)
        throw InvalidInput("session has not been segmented yet");
    const SegmentResult r = apply_edit(*e.session, strokes);
    return publish(e, *e.session, r);
}

bool SessionStore::erase(const std::string& id)
{
    std::lock_guard lock(mutex_);
    return sessions_.erase(id) > 0;
}

std::size_t SessionStore::size() const
{
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

std::size_t SessionStore::expire()
{
    const auto now = Clock::now();
    std::lock_guard lock(mutex_);
    std::size_t dropped = 0;
    for (auto it = sessions_.begin(); it != sessions_.end();) {
        Entry& e = *it->second;
        bool idle;
        {
            std::lock_guard state(e.state);
            idle = now - e.last_access > options_.idle_timeout;
        }
        std::unique_lock busy(e.mutation, std::try_to_lock);
        if (idle && busy.owns_lock()) {
            busy.unlock();
            it = sessions_.erase(it);
            ++dropped;
        } else {
            ++it;
        }
    }
    return dropped;
}

struct Service::Impl {
    explicit Impl(ServiceOptions o) : options(std::move(o)), store(options.store) {}

    ServiceOptions options;
    SessionStore store;
    httplib::Server server;

    void routes();
};

void Service::Impl::routes()
{
    server.set_payload_max_length(512u << 20);
    if (options.static_dir && !server.set_mount_point("/", options.static_dir->string()))
        throw InvalidPath("static directory not found: " + options.static_dir->string());

    server.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            if (const auto dims = png_dimensions(req.body);
                dims && std::uint64_t(dims->first) * dims->second > store.options().max_pixels)
                throw PayloadTooLarge("image exceeds " + std::to_string(store.options().max_pixels) + " pixels");
            const auto* p = reinterpret_cast<const std::uint8_t*>(req.body.data());
            RgbImage image = load_image(std::span<const std::uint8_t>(p, req.body.size()));
            const int w = image.width();
            const int h = image.height();
            const std::string id = store.create(std::move(image));
            send_json(res, {{"id", id}, {"width", w}, {"height", h}});
        });
    });

    server.Get(R"(/sessions/([^/]+)/superpixels)", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { send_json(res, superpixels_json(store.prepared(req.matches[1])->regions)); });
    });

    server.Post(R"(/sessions/([^/]+)/segment)", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const std::string id = req.matches[1];
            auto guard = store.try_mutate(id);
            if (!guard)
                return send_error(res, 409, "another request is modifying this session");
            const auto body = nlohmann::json::parse(req.body);
            const bool nc_cut0 = body.is_object() && body.value("nc_cut0", false);
            send_json(res, store.segment(*guard, polygon_from(body), nc_cut0)->payload);
        });
    });

    server.Post(R"(/sessions/([^/]+)/edit)", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const std::string id = req.matches[1];
            auto guard = store.try_mutate(id);
            if (!guard)
                return send_error(res, 409, "another request is modifying this session");
            const auto strokes = strokes_from(nlohmann::json::parse(req.body));
            send_json(res, store.edit(*guard, strokes)->payload);
        });
    });

    // read endpoints serve the last published snapshot
    auto segmented = [this](const std::string& id) {
        auto snap = store.snapshot(id);
        if (!snap->segmented)
            throw SessionNotFound("session '" + id + "' has no segmentation yet");
        return snap;
    };

    server.Get(R"(/sessions/([^/]+)/ncmap)", [segmented](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { send_png(res, segmented(req.matches[1])->ncmap_png); });
    });

    server.Get(R"(/sessions/([^/]+)/candidates)", [segmented](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { send_json(res, segmented(req.matches[1])->candidates); });
    });

    server.Get(R"(/sessions/([^/]+)/mask)", [segmented](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { send_png(res, segmented(req.matches[1])->mask_png); });
    });

    server.Delete(R"(/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            if (!store.erase(req.matches[1]))
                throw SessionNotFound("unknown session '" + std::string(req.matches[1]) + "'");
            res.status = 204;
        });
    });
}

Service::Service(ServiceOptions options) : impl_(std::make_unique<Impl>(std::move(options)))
{
    impl_->routes();
}

Service::~Service()
{
    stop();
}

SessionStore& Service::store() noexcept
{
    return impl_->store;
}

bool Service::listen(const std::string& host, int port)
{
    return impl_->server.listen(host, port);
}

int Service::bind_any_port(const std::string& host)
{
    return impl_->server.bind_to_any_port(host);
}

bool Service::listen_after_bind()
{
    return impl_->server.listen_after_bind();
}

void Service::wait_until_ready() const
{
    impl_->server.wait_until_ready();
}

void Service::stop()
{
    if (impl_)
        impl_->server.stop();
}

} // namespace nccut
