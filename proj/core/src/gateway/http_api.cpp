#include "healthledger/gateway/http_api.hpp"

#include <httplib.h>

#include <functional>

#include "healthledger/common/canonical.hpp"

namespace hl::gateway {

int http_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Authorization:
    case ErrorKind::ConsentRequired:
    case ErrorKind::ConsentExpired:
      return 403;
    case ErrorKind::InvalidIdentity:
    case ErrorKind::InvalidPassword:
    case ErrorKind::InvalidSignature:
    case ErrorKind::SessionExpired:
      return 401;
    case ErrorKind::NotFound:
    case ErrorKind::UnknownDoctor:
    case ErrorKind::UnknownMedicine:
    case ErrorKind::UnknownNode:
      return 404;
    case ErrorKind::Validation:
    case ErrorKind::UnauthorizedMedicine:
    case ErrorKind::EmptyInput:
      return 422;
    case ErrorKind::Duplicate:
    case ErrorKind::DuplicateIdentity:
    case ErrorKind::SlotTaken:
    case ErrorKind::NotPending:
    case ErrorKind::InvalidTransition:
    case ErrorKind::AlreadyBootstrapped:
      return 409;
    case ErrorKind::SizeLimit:
    case ErrorKind::Oversize:
      return 413;
    case ErrorKind::Timeout:
      return 504;
    case ErrorKind::PolicyUnsatisfied:
    case ErrorKind::TargetUnreachable:
      return 503;
    case ErrorKind::Chaincode:
      return 400;
    default:
      return 500;
  }
}

namespace {

using Req = httplib::Request;
using Res = httplib::Response;

void send_json(Res& res, int status, const Json& body) {
  res.status = status;
  res.set_content(canonical_dump(body), "application/json");
}

void send_error(Res& res, ErrorKind kind, const std::string& message) {
  send_json(res, http_status(kind), Json{{"error", std::string(to_string(kind))}, {"message", message}});
}

Json body_of(const Req& req) {
  if (req.body.empty()) return Json::object();
  try {
    auto j = Json::parse(req.body);
    if (!j.is_object()) fail(ErrorKind::Validation, "request body must be a JSON object");
    return j;
  } catch (const Json::parse_error&) {
    fail(ErrorKind::Validation, "request body is not valid JSON");
  }
}

std::string bearer(const Req& req) {
  auto h = req.get_header_value("Authorization");
  constexpr std::string_view prefix = "Bearer ";
  if (h.size() <= prefix.size() || h.compare(0, prefix.size(), prefix) != 0) {
    fail(ErrorKind::SessionExpired, "missing bearer token");
  }
  return h.substr(prefix.size());
}

Json receipt_body(const InvokeResult& r) {
  Json out{{"result", r.result}, {"tx_id", r.tx_id.hex()}};
  if (r.receipt) {
    out["block_number"] = r.receipt->block_number;
    out["tx_index"] = r.receipt->tx_index;
    out["valid"] = r.receipt->valid;
  }
  return out;
}

const Json& need(const Json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end()) fail(ErrorKind::Validation, std::string("missing field '") + key + "'");
  return *it;
}

Json pick(const Json& body, std::initializer_list<const char*> keys) {
  auto out = Json::object();
  for (const auto* k : keys) {
    if (body.contains(k)) out[k] = body[k];
  }
  return out;
}

}  // namespace

struct HttpApi::Impl {
  Gateway& gw;
  httplib::Server server;

  explicit Impl(Gateway& g) : gw(g) { routes(); }

  using Handler = std::function<void(const Req&, Res&)>;

  static Handler guarded(Handler h) {
    return [h = std::move(h)](const Req& req, Res& res) {
      try {
        h(req, res);
      } catch (const Error& e) {
        send_error(res, e.kind(), e.what());
      } catch (const std::exception& e) {
        send_json(res, 500, Json{{"error", "InternalError"}, {"message", e.what()}});
      }
    };
  }

  // Route that invokes one contract function. `args` maps the request to
  // the positional argument list.
  Handler contract(std::string fn, std::function<Json(const Req&, const Json&)> args) {
    return guarded([this, fn = std::move(fn), args = std::move(args)](const Req& req, Res& res) {
      auto token = bearer(req);
      auto result = gw.invoke(token, fn, args(req, req.method == "GET" ? Json::object() : body_of(req)));
      if (result.receipt && !result.receipt->valid) {
        auto body = receipt_body(result);
        body["error"] = "MvccConflict";
        body["message"] = "transaction was ordered but invalidated by a concurrent update";
        send_json(res, 409, body);
        return;
      }
      send_json(res, result.receipt ? 201 : 200, receipt_body(result));
    });
  }

  void routes() {
    server.Get("/health", guarded([this](const Req&, Res& res) {
                 send_json(res, 200, Json{{"height", gw.chain_height()}, {"status", "ok"}});
               }));

    server.Post("/auth/login", guarded([this](const Req& req, Res& res) {
                  auto body = body_of(req);
                  auto id = need(body, "identity_id").get<std::string>();
                  auto password = need(body, "password").get<std::string>();
                  auto s = gw.login(id, password);
                  send_json(res, 200,
                            Json{{"identity_id", s.identity_id},
                                 {"org", s.org},
                                 {"role", std::string(chaincode::to_string(s.stakeholder))},
                                 {"token", s.token}});
                }));
    server.Post("/auth/logout", guarded([this](const Req& req, Res& res) {
                  gw.logout(bearer(req));
                  send_json(res, 200, Json{{"status", "ok"}});
                }));

    server.Post("/admin/users", guarded([this](const Req& req, Res& res) {
                  auto body = body_of(req);
                  identity::UserProfile profile;
                  profile.identity_id = need(body, "identity_id").get<std::string>();
                  profile.display_name = body.value("display_name", profile.identity_id);
                  if (body.contains("attrs")) profile.attrs = body["attrs"];
                  auto role = identity::parse_role(body.value("role", std::string("user")));
                  if (!role) fail(ErrorKind::Validation, "role must be user or admin");
                  auto card =
                      gw.register_user(bearer(req), profile, *role, need(body, "password").get<std::string>());
                  send_json(res, 201,
                            Json{{"certificate", card.certificate.to_json()},
                                 {"identity_id", card.identity_id},
                                 {"org", card.org}});
                }));

    server.Post("/doctors", contract("health.register_doctor", [](const Req&, const Json& b) {
                  return Json::array({pick(b, {"name", "specialty", "doctor_id"})});
                }));
    server.Get(R"(/doctors/([^/]+))", contract("health.get_doctor", [](const Req& r, const Json&) {
                 return Json::array({r.matches[1].str()});
               }));
    server.Post(R"(/doctors/([^/]+)/approve)", contract("health.approve_doctor", [](const Req& r, const Json& b) {
                  return Json::array({r.matches[1].str(), b.value("decision", std::string("approve"))});
                }));
    server.Post(R"(/doctors/([^/]+)/credentials)",
                contract("health.submit_credential_update", [](const Req& r, const Json& b) {
                  return Json::array({r.matches[1].str(), pick(b, {"degree", "institution", "doc_digest"})});
                }));
    server.Post(R"(/credentials/([^/]+)/approve)",
                contract("health.approve_credential",
                         [](const Req& r, const Json&) { return Json::array({r.matches[1].str()}); }));

    server.Get("/medicines", contract("health.list_medicines", [](const Req&, const Json&) { return Json::array(); }));
    server.Post("/medicines", contract("health.add_medicine", [](const Req&, const Json& b) {
                  return Json::array({pick(b, {"medicine_id", "generic_name", "contraindications", "authorized",
                                               "free_under_esp"})});
                }));
    server.Post(R"(/medicines/([^/]+)/authorize)",
                contract("health.set_medicine_authorized", [](const Req& r, const Json& b) {
                  return Json::array({r.matches[1].str(), b.value("authorized", true)});
                }));

    server.Post("/patients", contract("health.upsert_patient", [](const Req&, const Json& b) {
                  return Json::array({pick(b, {"demographics", "allergies"})});
                }));
    server.Get(R"(/patients/([^/]+)/history)", contract("health.get_medical_history", [](const Req& r, const Json&) {
                 return Json::array({r.matches[1].str()});
               }));
    server.Post(R"(/patients/([^/]+)/tests)", contract("health.add_test_result", [](const Req& r, const Json& b) {
                  return Json::array({r.matches[1].str(), need(b, "doc_digest"), need(b, "description")});
                }));
    server.Post("/prescriptions", contract("health.create_prescription", [](const Req&, const Json& b) {
                  return Json::array({need(b, "patient_id"), need(b, "items")});
                }));
    server.Post("/consents", contract("health.grant_consent", [](const Req&, const Json& b) {
                  return Json::array({need(b, "doctor_id"), b.value("ttl_ms", Json(nullptr))});
                }));

    server.Post("/appointments", contract("health.request_appointment", [](const Req&, const Json& b) {
                  return Json::array({need(b, "doctor_id"), need(b, "slot")});
                }));
    server.Post(R"(/appointments/([^/]+)/confirm)",
                contract("health.confirm_appointment",
                         [](const Req& r, const Json&) { return Json::array({r.matches[1].str()}); }));
    server.Post(R"(/appointments/([^/]+)/cancel)",
                contract("health.cancel_appointment",
                         [](const Req& r, const Json&) { return Json::array({r.matches[1].str()}); }));

    server.Post("/complaints", contract("health.file_complaint", [](const Req&, const Json& b) {
                  return Json::array({need(b, "subject"), need(b, "body"), need(b, "severity")});
                }));
    server.Get(R"(/complaints/([^/]+))", contract("health.get_complaint_status", [](const Req& r, const Json&) {
                 return Json::array({r.matches[1].str()});
               }));
    server.Post(R"(/complaints/([^/]+)/review)", contract("health.review_complaint", [](const Req& r, const Json& b) {
                  return Json::array({r.matches[1].str(), b.value("action", std::string("review"))});
                }));

    server.Get("/specialists", contract("health.find_specialist", [](const Req& r, const Json&) {
                 if (!r.has_param("specialty")) fail(ErrorKind::Validation, "missing query parameter 'specialty'");
                 return Json::array({r.get_param_value("specialty")});
               }));
    server.Post("/distributions", contract("health.record_distribution", [](const Req&, const Json& b) {
                  return Json::array({pick(b, {"medicine_id", "facility", "quantity"})});
                }));
    server.Get(R"(/analytics/tendency/([^/]+))",
               contract("health.prescribing_tendency",
                        [](const Req& r, const Json&) { return Json::array({r.matches[1].str()}); }));
    server.Get("/analytics/stats", contract("health.anonymized_stats", [](const Req& r, const Json&) {
                 return Json::array({r.has_param("group_by") ? r.get_param_value("group_by") : "specialty"});
               }));
    server.Post("/news", contract("health.post_news", [](const Req&, const Json& b) {
                  return Json::array({pick(b, {"title", "body"})});
                }));
    server.Get("/news", contract("health.get_news", [](const Req&, const Json&) { return Json::array(); }));

    server.Put("/documents", guarded([this](const Req& req, Res& res) {
                 auto media = req.get_header_value("Content-Type");
                 if (media.empty()) media = "application/octet-stream";
                 Bytes content(req.body.begin(), req.body.end());
                 auto digest = gw.put_document(bearer(req), std::move(content), media);
                 send_json(res, 201, Json{{"digest", digest.hex()}, {"size_bytes", req.body.size()}});
               }));
    server.Get(R"(/documents/([0-9a-fA-F]{64}))", guarded([this](const Req& req, Res& res) {
                 auto doc = gw.get_document(bearer(req), Digest256::from_hex(req.matches[1].str()));
                 res.status = 200;
                 res.set_header("X-Content-Digest", doc.digest.hex());
                 res.set_content(std::string(doc.content.begin(), doc.content.end()), doc.media_type);
               }));

    // httplib's default adds SO_REUSEPORT, which lets a second server share
    // the port silently.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });
    server.set_payload_max_length(gw.options().doc_limit + 1024 * 1024);
    // Keep-alive connections each hold a worker, so size the pool for many
    // concurrent clients.
    server.new_task_queue = [] { return new httplib::ThreadPool(128); };
  }
};

HttpApi::HttpApi(Gateway& gateway) : impl_(std::make_unique<Impl>(gateway)) {}

HttpApi::~HttpApi() { stop(); }

std::uint16_t HttpApi::start(const std::string& host, std::uint16_t port) {
  int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound <= 0) fail(ErrorKind::Bind, "cannot bind " + host + ":" + std::to_string(port));
  port_ = static_cast<std::uint16_t>(bound);
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port_;
}

void HttpApi::listen(const std::string& host, std::uint16_t port) {
  if (!impl_->server.bind_to_port(host, port)) fail(ErrorKind::Bind, "cannot bind " + host + ":" + std::to_string(port));
  port_ = port;
  impl_->server.listen_after_bind();
}

void HttpApi::stop() {
  impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace hl::gateway
