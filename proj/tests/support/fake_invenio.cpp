#include "support/fake_invenio.hpp"

#include <httplib.h>

#include <chrono>

namespace testsupport {

using hermes::Json;

FakeInvenioServer::FakeInvenioServer(std::string expected_token)
    : token_(std::move(expected_token)), server_(std::make_unique<httplib::Server>()) {
    setup_routes();
    port_ = server_->bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
}

FakeInvenioServer::~FakeInvenioServer() {
    server_->stop();
    if (thread_.joinable()) {
        thread_.join();
    }
}

std::string FakeInvenioServer::base_url() const {
    return "http://127.0.0.1:" + std::to_string(port_);
}

std::vector<std::string> FakeInvenioServer::call_log() const {
    std::lock_guard lock(mutex_);
    return calls_;
}

int FakeInvenioServer::mutation_count() const {
    std::lock_guard lock(mutex_);
    return mutations_;
}

int FakeInvenioServer::published_count() const {
    std::lock_guard lock(mutex_);
    int count = 0;
    for (const auto& [id, record] : records_) {
        if (record.published) {
            ++count;
        }
    }
    return count;
}

int FakeInvenioServer::lineage_count() const {
    std::lock_guard lock(mutex_);
    std::vector<std::string> seen;
    for (const auto& [id, record] : records_) {
        if (std::find(seen.begin(), seen.end(), record.lineage) == seen.end()) {
            seen.push_back(record.lineage);
        }
    }
    return static_cast<int>(seen.size());
}

std::optional<FakeInvenioServer::StoredRecord>
FakeInvenioServer::record(const std::string& id) const {
    std::lock_guard lock(mutex_);
    auto it = records_.find(id);
    if (it == records_.end()) {
        return std::nullopt;
    }
    return it->second;
}

void FakeInvenioServer::fail_next(int status, int times) {
    std::lock_guard lock(mutex_);
    injected_status_ = status;
    injected_remaining_ = times;
}

std::string FakeInvenioServer::minted_doi(const std::string& record_id) {
    return "10.1234/fake." + record_id;
}

namespace {

void reply_json(httplib::Response& res, int status, const Json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& message) {
    reply_json(res, status, Json{{"status", status}, {"message", message}});
}

} // namespace

void FakeInvenioServer::setup_routes() {
    // Every handler funnels through guard() for logging, auth and failure
    // injection; handlers themselves only mutate the record store.
    auto guard = [this](const httplib::Request& req, httplib::Response& res,
                        bool mutation) -> bool {
        std::lock_guard lock(mutex_);
        calls_.push_back(req.method + " " + req.path);
        if (injected_remaining_ > 0) {
            --injected_remaining_;
            reply_error(res, injected_status_, "injected failure");
            return false;
        }
        if (req.get_header_value("Authorization") != "Bearer " + token_) {
            reply_error(res, 401, "invalid or missing token");
            return false;
        }
        if (mutation) {
            ++mutations_;
        }
        return true;
    };

    auto store_draft = [this](const Json& payload) -> std::string {
        std::lock_guard lock(mutex_);
        StoredRecord draft;
        draft.id = std::to_string(next_id_++);
        draft.lineage = draft.id;
        draft.metadata = payload;
        draft.published = false;
        records_[draft.id] = draft;
        return draft.id;
    };

    // ------------------------------------------------------- record API

    server_->Post("/api/records", [=, this](const httplib::Request& req,
                                            httplib::Response& res) {
        if (!guard(req, res, true)) {
            return;
        }
        Json payload = req.body.empty() ? Json::object() : Json::parse(req.body, nullptr, false);
        std::string id = store_draft(payload);
        reply_json(res, 201, Json{{"id", id}});
    });

    server_->Get(R"(/api/records/(\d+))", [=, this](const httplib::Request& req,
                                                    httplib::Response& res) {
        if (!guard(req, res, false)) {
            return;
        }
        std::lock_guard lock(mutex_);
        auto it = records_.find(req.matches[1]);
        if (it == records_.end() || !it->second.published) {
            reply_error(res, 404, "record not found");
            return;
        }
        reply_json(res, 200,
                   Json{{"id", it->second.id},
                        {"metadata", it->second.metadata.value("metadata", Json::object())},
                        {"versions", Json{{"index", it->second.version}}}});
    });

    server_->Put(R"(/api/records/(\d+)/draft)", [=, this](const httplib::Request& req,
                                                          httplib::Response& res) {
        if (!guard(req, res, true)) {
            return;
        }
        std::lock_guard lock(mutex_);
        auto it = records_.find(req.matches[1]);
        if (it == records_.end() || it->second.published) {
            reply_error(res, 404, "draft not found");
            return;
        }
        it->second.metadata = Json::parse(req.body, nullptr, false);
        reply_json(res, 200, Json{{"id", it->second.id}});
    });

    server_->Post(R"(/api/records/(\d+)/versions)", [=, this](const httplib::Request& req,
                                                              httplib::Response& res) {
        if (!guard(req, res, true)) {
            return;
        }
        std::lock_guard lock(mutex_);
        auto it = records_.find(req.matches[1]);
        if (it == records_.end() || !it->second.published) {
            reply_error(res, 404, "record not found");
            return;
        }
        StoredRecord draft;
        draft.id = std::to_string(next_id_++);
        draft.lineage = it->second.lineage;
        draft.version = it->second.version + 1;
        draft.metadata = it->second.metadata;
        draft.published = false;
        records_[draft.id] = draft;
        reply_json(res, 201, Json{{"id", draft.id}});
    });

    server_->Post(R"(/api/records/(\d+)/draft/files)", [=, this](const httplib::Request& req,
                                                                 httplib::Response& res) {
        if (!guard(req, res, true)) {
            return;
        }
        std::lock_guard lock(mutex_);
        auto it = records_.find(req.matches[1]);
        if (it == records_.end() || it->second.published) {
            reply_error(res, 404, "draft not found");
            return;
        }
        reply_json(res, 201, Json::object());
    });

    server_->Put(R"(/api/records/(\d+)/draft/files/([^/]+)/content)",
                 [=, this](const httplib::Request& req, httplib::Response& res) {
                     if (!guard(req, res, true)) {
                         return;
                     }
                     std::lock_guard lock(mutex_);
                     auto it = records_.find(req.matches[1]);
                     if (it == records_.end() || it->second.published) {
                         reply_error(res, 404, "draft not found");
                         return;
                     }
                     it->second.files.push_back(req.matches[2]);
                     reply_json(res, 200, Json::object());
                 });

    server_->Post(R"(/api/records/(\d+)/draft/files/([^/]+)/commit)",
                  [=, this](const httplib::Request& req, httplib::Response& res) {
                      if (!guard(req, res, true)) {
                          return;
                      }
                      reply_json(res, 200, Json::object());
                  });

    server_->Post(R"(/api/records/(\d+)/draft/actions/publish)",
                  [=, this](const httplib::Request& req, httplib::Response& res) {
                      if (!guard(req, res, true)) {
                          return;
                      }
                      std::lock_guard lock(mutex_);
                      auto it = records_.find(req.matches[1]);
                      if (it == records_.end() || it->second.published) {
                          reply_error(res, 404, "draft not found");
                          return;
                      }
                      it->second.published = true;
                      it->second.doi = minted_doi(it->second.id);
                      reply_json(res, 202,
                                 Json{{"id", it->second.id},
                                      {"pids", Json{{"doi", Json{{"identifier",
                                                                  it->second.doi}}}}}});
                  });

    // ----------------------------------------------- legacy deposition API

    server_->Post("/api/deposit/depositions", [=, this](const httplib::Request& req,
                                                        httplib::Response& res) {
        if (!guard(req, res, true)) {
            return;
        }
        Json payload = req.body.empty() ? Json::object() : Json::parse(req.body, nullptr, false);
        std::string id = store_draft(payload);
        reply_json(res, 201, Json{{"id", std::stoi(id)}});
    });

    server_->Get(R"(/api/deposit/depositions/(\d+))",
                 [=, this](const httplib::Request& req, httplib::Response& res) {
                     if (!guard(req, res, false)) {
                         return;
                     }
                     std::lock_guard lock(mutex_);
                     auto it = records_.find(req.matches[1]);
                     if (it == records_.end()) {
                         reply_error(res, 404, "deposition not found");
                         return;
                     }
                     reply_json(res, 200, Json{{"id", std::stoi(it->second.id)}});
                 });

    server_->Post(R"(/api/deposit/depositions/(\d+)/files)",
                  [=, this](const httplib::Request& req, httplib::Response& res) {
                      if (!guard(req, res, true)) {
                          return;
                      }
                      std::lock_guard lock(mutex_);
                      auto it = records_.find(req.matches[1]);
                      if (it == records_.end() || it->second.published) {
                          reply_error(res, 404, "deposition not found");
                          return;
                      }
                      if (req.has_file("file")) {
                          it->second.files.push_back(req.get_file_value("file").filename);
                      }
                      reply_json(res, 201, Json::object());
                  });

    server_->Post(R"(/api/deposit/depositions/(\d+)/actions/newversion)",
                  [=, this](const httplib::Request& req, httplib::Response& res) {
                      if (!guard(req, res, true)) {
                          return;
                      }
                      std::lock_guard lock(mutex_);
                      auto it = records_.find(req.matches[1]);
                      if (it == records_.end() || !it->second.published) {
                          reply_error(res, 404, "deposition not found");
                          return;
                      }
                      StoredRecord draft;
                      draft.id = std::to_string(next_id_++);
                      draft.lineage = it->second.lineage;
                      draft.version = it->second.version + 1;
                      draft.metadata = it->second.metadata;
                      records_[draft.id] = draft;
                      reply_json(res, 201, Json{{"id", std::stoi(draft.id)}});
                  });

    server_->Put(R"(/api/deposit/depositions/(\d+))",
                 [=, this](const httplib::Request& req, httplib::Response& res) {
                     if (!guard(req, res, true)) {
                         return;
                     }
                     std::lock_guard lock(mutex_);
                     auto it = records_.find(req.matches[1]);
                     if (it == records_.end() || it->second.published) {
                         reply_error(res, 404, "deposition not found");
                         return;
                     }
                     it->second.metadata = Json::parse(req.body, nullptr, false);
                     reply_json(res, 200, Json{{"id", std::stoi(it->second.id)}});
                 });

    server_->Post(R"(/api/deposit/depositions/(\d+)/actions/publish)",
                  [=, this](const httplib::Request& req, httplib::Response& res) {
                      if (!guard(req, res, true)) {
                          return;
                      }
                      std::lock_guard lock(mutex_);
                      auto it = records_.find(req.matches[1]);
                      if (it == records_.end() || it->second.published) {
                          reply_error(res, 404, "deposition not found");
                          return;
                      }
                      it->second.published = true;
                      it->second.doi = minted_doi(it->second.id);
                      reply_json(res, 202,
                                 Json{{"id", std::stoi(it->second.id)},
                                      {"doi", it->second.doi}});
                  });
}

} // namespace testsupport
