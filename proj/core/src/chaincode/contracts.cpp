#include "healthledger/chaincode/contracts.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "healthledger/chaincode/health_rules.hpp"
#include "healthledger/common/error.hpp"

namespace hl::chaincode {

namespace {

using S = Stakeholder;
const std::set<S> kAnyone{S::Nagorik, S::Doctor, S::Authority, S::Admin};

// ---- argument access --------------------------------------------------------

const Json& arg(const Json& args, std::size_t i, std::string_view name) {
  if (!args.is_array() || i >= args.size()) {
    fail(ErrorKind::Validation, "missing argument " + std::to_string(i) + " (" + std::string(name) + ")");
  }
  return args[i];
}

std::string arg_string(const Json& args, std::size_t i, std::string_view name) {
  const auto& v = arg(args, i, name);
  if (!v.is_string() || v.get<std::string>().empty()) {
    fail(ErrorKind::Validation, "argument '" + std::string(name) + "' must be a non-empty string");
  }
  return v.get<std::string>();
}

std::int64_t arg_int(const Json& args, std::size_t i, std::string_view name) {
  const auto& v = arg(args, i, name);
  if (!v.is_number_integer()) fail(ErrorKind::Validation, "argument '" + std::string(name) + "' must be an integer");
  return v.get<std::int64_t>();
}

const Json& arg_object(const Json& args, std::size_t i, std::string_view name) {
  const auto& v = arg(args, i, name);
  if (!v.is_object()) fail(ErrorKind::Validation, "argument '" + std::string(name) + "' must be an object");
  return v;
}

std::string field_string(const Json& obj, std::string_view key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string() || it->get<std::string>().empty()) {
    fail(ErrorKind::Validation, "field '" + std::string(key) + "' must be a non-empty string");
  }
  return it->get<std::string>();
}

std::vector<std::string> string_list(const Json& obj, std::string_view key) {
  std::vector<std::string> out;
  auto it = obj.find(key);
  if (it == obj.end()) return out;
  if (!it->is_array()) fail(ErrorKind::Validation, "field '" + std::string(key) + "' must be a list");
  for (const auto& v : *it) {
    if (!v.is_string()) fail(ErrorKind::Validation, "field '" + std::string(key) + "' must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

[[noreturn]] void deny(const std::string& why) { fail(ErrorKind::Authorization, why); }

// ---- keys ------------------------------------------------------------------

std::string doctor_key(const std::string& id) { return "health/doctor/" + id; }
std::string credential_key(const std::string& id) { return "health/credential/" + id; }
std::string patient_key(const std::string& id) { return "health/patient/" + id; }
std::string medicine_key(const std::string& id) { return "health/medicine/" + id; }
std::string rx_key(const std::string& id) { return "health/rx/" + id; }
std::string appt_key(const std::string& id) { return "health/appt/" + id; }
std::string slot_key(const std::string& doctor, std::int64_t slot) {
  return "appt-slot/" + doctor + "/" + std::to_string(slot);
}
std::string complaint_key(const std::string& id) { return "health/complaint/" + id; }
std::string distribution_key(const std::string& id) { return "health/distribution/" + id; }
std::string news_key(const std::string& id) { return "health/news/" + id; }

// ---- shared lookups ----------------------------------------------------------

Json require_doctor(TxContext& ctx, const std::string& doctor_id) {
  auto doc = ctx.get_json(doctor_key(doctor_id));
  if (!doc) fail(ErrorKind::UnknownDoctor, "no doctor '" + doctor_id + "'");
  return *doc;
}

Json require_entity(TxContext& ctx, const std::string& key, const std::string& what) {
  auto v = ctx.get_json(key);
  if (!v) fail(ErrorKind::NotFound, what + " not found");
  return *v;
}

Json empty_patient(const std::string& patient_id) {
  return Json{{"allergies", Json::array()},
              {"consents", Json::object()},
              {"demographics", Json::object()},
              {"history", Json::array()},
              {"patient_id", patient_id}};
}

// Unexpired consent from patient to doctor; throws otherwise.
void require_consent(const Json& patient, const std::string& doctor_id, std::int64_t now) {
  const auto& consents = patient["consents"];
  auto it = consents.find(doctor_id);
  if (it == consents.end()) fail(ErrorKind::ConsentRequired, "patient has not given consent");
  if (it->get<std::int64_t>() <= now) fail(ErrorKind::ConsentExpired, "consent has expired");
}

// Credentials others may see: verified ones only.
Json public_doctor_view(const Json& doctor) {
  auto view = doctor;
  auto creds = Json::array();
  for (const auto& c : doctor["credentials"]) {
    if (c["verified"].get<bool>()) creds.push_back(c);
  }
  view["credentials"] = std::move(creds);
  return view;
}

// ---- health contract ---------------------------------------------------------

Json register_doctor(TxContext& ctx, const Json& args) {
  const auto& profile = arg_object(args, 0, "profile");
  const auto& doctor_id = ctx.invoker().identity_id;
  if (profile.contains("doctor_id") && profile["doctor_id"] != doctor_id) {
    deny("a doctor may only register their own profile");
  }
  if (ctx.get(doctor_key(doctor_id))) fail(ErrorKind::Duplicate, "doctor '" + doctor_id + "' already registered");
  Json doctor{{"credentials", Json::array()},
              {"doctor_id", doctor_id},
              {"name", field_string(profile, "name")},
              {"registered_at", ctx.now_ms()},
              {"specialty", field_string(profile, "specialty")},
              {"status", "pending"}};
  ctx.put_json(doctor_key(doctor_id), doctor);
  return doctor;
}

Json approve_doctor(TxContext& ctx, const Json& args) {
  auto doctor_id = arg_string(args, 0, "doctor_id");
  auto decision = arg_string(args, 1, "decision");
  if (decision != "approve" && decision != "reject") {
    fail(ErrorKind::Validation, "decision must be 'approve' or 'reject'");
  }
  auto doctor = require_doctor(ctx, doctor_id);
  if (doctor["status"] != "pending") fail(ErrorKind::NotPending, "doctor '" + doctor_id + "' is not pending");
  doctor["status"] = decision == "approve" ? "approved" : "rejected";
  ctx.put_json(doctor_key(doctor_id), doctor);
  return doctor;
}

Json submit_credential_update(TxContext& ctx, const Json& args) {
  auto doctor_id = arg_string(args, 0, "doctor_id");
  const auto& credential = arg_object(args, 1, "credential");
  if (doctor_id != ctx.invoker().identity_id) deny("a doctor may only update their own credentials");
  auto doctor = require_doctor(ctx, doctor_id);
  if (doctor["status"] != "approved") deny("only approved doctors may submit credential updates");

  auto digest = field_string(credential, "doc_digest");
  if (digest.size() != 64) fail(ErrorKind::Validation, "doc_digest must be a 64-char hex digest");
  auto credential_id = doctor_id + "-" + ctx.derive_id("credential");
  Json entry{{"credential_id", credential_id},
             {"degree", field_string(credential, "degree")},
             {"doc_digest", digest},
             {"institution", field_string(credential, "institution")},
             {"verified", false}};
  doctor["credentials"].push_back(entry);
  ctx.put_json(doctor_key(doctor_id), doctor);
  ctx.put_json(credential_key(credential_id), Json{{"doctor_id", doctor_id}});
  return entry;
}

Json approve_credential(TxContext& ctx, const Json& args) {
  auto credential_id = arg_string(args, 0, "credential_id");
  auto index = require_entity(ctx, credential_key(credential_id), "credential");
  auto doctor_id = index["doctor_id"].get<std::string>();
  auto doctor = require_doctor(ctx, doctor_id);
  for (auto& c : doctor["credentials"]) {
    if (c["credential_id"] != credential_id) continue;
    if (c["verified"].get<bool>()) fail(ErrorKind::NotPending, "credential already verified");
    c["verified"] = true;
    ctx.put_json(doctor_key(doctor_id), doctor);
    return c;
  }
  fail(ErrorKind::NotFound, "credential not found on profile");
}

Json get_doctor(TxContext& ctx, const Json& args) {
  auto doctor_id = arg_string(args, 0, "doctor_id");
  auto doctor = require_doctor(ctx, doctor_id);
  const auto& inv = ctx.invoker();
  if (inv.stakeholder == S::Authority || inv.identity_id == doctor_id) return doctor;
  if (doctor["status"] != "approved") fail(ErrorKind::UnknownDoctor, "no doctor '" + doctor_id + "'");
  return public_doctor_view(doctor);
}

Json find_specialist(TxContext& ctx, const Json& args) {
  auto specialty = arg_string(args, 0, "specialty");
  auto out = Json::array();
  for (const auto& [key, doctor] : ctx.scan_json("health/doctor/")) {
    if (doctor["status"] == "approved" && doctor["specialty"] == specialty) out.push_back(public_doctor_view(doctor));
  }
  return out;
}

Json add_medicine(TxContext& ctx, const Json& args) {
  const auto& m = arg_object(args, 0, "medicine");
  auto id = field_string(m, "medicine_id");
  if (ctx.get(medicine_key(id))) fail(ErrorKind::Duplicate, "medicine '" + id + "' already listed");
  auto contraindications = string_list(m, "contraindications");
  std::sort(contraindications.begin(), contraindications.end());
  Json medicine{{"authorized", m.value("authorized", false)},
                {"contraindications", contraindications},
                {"free_under_esp", m.value("free_under_esp", false)},
                {"generic_name", field_string(m, "generic_name")},
                {"medicine_id", id}};
  ctx.put_json(medicine_key(id), medicine);
  return medicine;
}

Json set_medicine_authorized(TxContext& ctx, const Json& args) {
  auto id = arg_string(args, 0, "medicine_id");
  const auto& flag = arg(args, 1, "authorized");
  if (!flag.is_boolean()) fail(ErrorKind::Validation, "argument 'authorized' must be a boolean");
  auto medicine = ctx.get_json(medicine_key(id));
  if (!medicine) fail(ErrorKind::UnknownMedicine, "no medicine '" + id + "'");
  (*medicine)["authorized"] = flag;
  ctx.put_json(medicine_key(id), *medicine);
  return *medicine;
}

Json list_medicines(TxContext& ctx, const Json&) {
  auto out = Json::array();
  for (const auto& [key, m] : ctx.scan_json("health/medicine/")) out.push_back(m);
  return out;
}

Json upsert_patient(TxContext& ctx, const Json& args) {
  const auto& profile = arg_object(args, 0, "profile");
  const auto& patient_id = ctx.invoker().identity_id;
  auto patient = ctx.get_json(patient_key(patient_id)).value_or(empty_patient(patient_id));
  if (profile.contains("demographics")) {
    if (!profile["demographics"].is_object()) fail(ErrorKind::Validation, "demographics must be an object");
    patient["demographics"] = profile["demographics"];
  }
  if (profile.contains("allergies")) {
    auto allergies = string_list(profile, "allergies");
    std::sort(allergies.begin(), allergies.end());
    allergies.erase(std::unique(allergies.begin(), allergies.end()), allergies.end());
    patient["allergies"] = allergies;
  }
  ctx.put_json(patient_key(patient_id), patient);
  return patient;
}

Json grant_consent(TxContext& ctx, const Json& args) {
  auto doctor_id = arg_string(args, 0, "doctor_id");
  std::int64_t ttl = kDefaultConsentTtlMs;
  if (args.size() > 1 && !args[1].is_null()) ttl = arg_int(args, 1, "ttl_ms");
  if (ttl <= 0) fail(ErrorKind::Validation, "ttl_ms must be positive");
  require_doctor(ctx, doctor_id);
  const auto& patient_id = ctx.invoker().identity_id;
  auto patient = ctx.get_json(patient_key(patient_id)).value_or(empty_patient(patient_id));
  patient["consents"][doctor_id] = ctx.now_ms() + ttl;
  ctx.put_json(patient_key(patient_id), patient);
  return Json{{"doctor_id", doctor_id}, {"expires_at", ctx.now_ms() + ttl}, {"patient_id", patient_id}};
}

Json create_prescription(TxContext& ctx, const Json& args) {
  auto patient_id = arg_string(args, 0, "patient_id");
  const auto& items = arg(args, 1, "items");
  if (!items.is_array()) fail(ErrorKind::Validation, "items must be a list");

  const auto& doctor_id = ctx.invoker().identity_id;
  auto doctor = ctx.get_json(doctor_key(doctor_id));
  if (!doctor || (*doctor)["status"] != "approved") deny("only approved doctors may prescribe");

  auto patient = ctx.get_json(patient_key(patient_id));
  if (!patient) fail(ErrorKind::ConsentRequired, "patient has not given consent");
  require_consent(*patient, doctor_id, ctx.now_ms());

  std::vector<std::string> medicine_ids;
  std::map<std::string, MedicineFacts> registry;
  auto normalized = Json::array();
  for (const auto& item : items) {
    if (!item.is_object()) fail(ErrorKind::Validation, "prescription item must be an object");
    auto medicine_id = field_string(item, "medicine_id");
    auto medicine = ctx.get_json(medicine_key(medicine_id));
    if (!medicine) fail(ErrorKind::UnknownMedicine, "no medicine '" + medicine_id + "'");
    if (!(*medicine)["authorized"].get<bool>()) {
      fail(ErrorKind::UnauthorizedMedicine, "medicine '" + medicine_id + "' is not authorized");
    }
    auto days = item.value("days", 0);
    if (days <= 0) fail(ErrorKind::Validation, "days must be positive");
    medicine_ids.push_back(medicine_id);
    registry[medicine_id] = MedicineFacts{medicine_id, string_list(*medicine, "contraindications")};
    normalized.push_back(Json{{"days", days}, {"dosage", field_string(item, "dosage")}, {"medicine_id", medicine_id}});
  }

  auto allergy_list = string_list(*patient, "allergies");
  std::set<std::string> allergies(allergy_list.begin(), allergy_list.end());
  auto warnings = threat_warnings(medicine_ids, allergies, registry);

  auto rx_id = ctx.derive_id("rx");
  Json rx{{"doctor_id", doctor_id}, {"issued_at", ctx.now_ms()}, {"items", std::move(normalized)},
          {"patient_id", patient_id}, {"rx_id", rx_id},          {"warnings", warnings}};
  ctx.put_json(rx_key(rx_id), rx);
  (*patient)["history"].push_back(Json{{"at", ctx.now_ms()}, {"kind", "prescription"}, {"ref", "rx/" + rx_id}});
  ctx.put_json(patient_key(patient_id), *patient);
  return rx;
}

Json add_test_result(TxContext& ctx, const Json& args) {
  auto patient_id = arg_string(args, 0, "patient_id");
  auto digest = arg_string(args, 1, "doc_digest");
  auto description = arg_string(args, 2, "description");
  if (digest.size() != 64) fail(ErrorKind::Validation, "doc_digest must be a 64-char hex digest");
  auto patient = ctx.get_json(patient_key(patient_id));
  if (!patient) fail(ErrorKind::ConsentRequired, "patient has not given consent");
  require_consent(*patient, ctx.invoker().identity_id, ctx.now_ms());
  Json ref{{"at", ctx.now_ms()},
           {"by", ctx.invoker().identity_id},
           {"description", description},
           {"kind", "test_result"},
           {"ref", "doc/" + digest}};
  (*patient)["history"].push_back(ref);
  ctx.put_json(patient_key(patient_id), *patient);
  return ref;
}

Json get_medical_history(TxContext& ctx, const Json& args) {
  auto patient_id = arg_string(args, 0, "patient_id");
  const auto& inv = ctx.invoker();
  if (inv.stakeholder == S::Nagorik && inv.identity_id != patient_id) deny("patients may only read their own history");
  auto patient = ctx.get_json(patient_key(patient_id));
  if (inv.stakeholder == S::Doctor) {
    if (!patient) fail(ErrorKind::ConsentRequired, "patient has not given consent");
    require_consent(*patient, inv.identity_id, ctx.now_ms());
  }
  if (!patient) patient = empty_patient(patient_id);
  auto prescriptions = Json::array();
  for (const auto& h : (*patient)["history"]) {
    if (h["kind"] != "prescription") continue;
    auto ref = h["ref"].get<std::string>();
    if (auto rx = ctx.get_json("health/" + ref)) prescriptions.push_back(*rx);
  }
  return Json{{"allergies", (*patient)["allergies"]},
              {"demographics", (*patient)["demographics"]},
              {"history", (*patient)["history"]},
              {"patient_id", patient_id},
              {"prescriptions", std::move(prescriptions)}};
}

Json request_appointment(TxContext& ctx, const Json& args) {
  auto doctor_id = arg_string(args, 0, "doctor_id");
  auto slot = arg_int(args, 1, "slot");
  auto doctor = require_doctor(ctx, doctor_id);
  if (doctor["status"] != "approved") fail(ErrorKind::UnknownDoctor, "doctor '" + doctor_id + "' is not approved");
  auto appt_id = ctx.derive_id("appt");
  Json appt{{"appt_id", appt_id},
            {"doctor_id", doctor_id},
            {"patient_id", ctx.invoker().identity_id},
            {"slot", slot},
            {"status", "requested"}};
  ctx.put_json(appt_key(appt_id), appt);
  return appt;
}

void require_appointment_party(const Invoker& inv, const Json& appt) {
  bool is_patient = inv.stakeholder == S::Nagorik && appt["patient_id"] == inv.identity_id;
  bool is_doctor = inv.stakeholder == S::Doctor && appt["doctor_id"] == inv.identity_id;
  if (!is_patient && !is_doctor) deny("only the patient or doctor of an appointment may change it");
}

Json confirm_appointment(TxContext& ctx, const Json& args) {
  auto appt_id = arg_string(args, 0, "appt_id");
  auto appt = require_entity(ctx, appt_key(appt_id), "appointment");
  require_appointment_party(ctx.invoker(), appt);
  if (appt["status"] != "requested") {
    fail(ErrorKind::InvalidTransition, "only a requested appointment can be confirmed");
  }
  auto slot = slot_key(appt["doctor_id"].get<std::string>(), appt["slot"].get<std::int64_t>());
  if (ctx.get(slot)) fail(ErrorKind::SlotTaken, "slot already booked");
  appt["status"] = "confirmed";
  ctx.put_json(slot, Json{{"appt_id", appt_id}});
  ctx.put_json(appt_key(appt_id), appt);
  return appt;
}

Json cancel_appointment(TxContext& ctx, const Json& args) {
  auto appt_id = arg_string(args, 0, "appt_id");
  auto appt = require_entity(ctx, appt_key(appt_id), "appointment");
  require_appointment_party(ctx.invoker(), appt);
  if (appt["status"] == "cancelled") fail(ErrorKind::InvalidTransition, "appointment already cancelled");
  if (appt["status"] == "confirmed") {
    ctx.del(slot_key(appt["doctor_id"].get<std::string>(), appt["slot"].get<std::int64_t>()));
  }
  appt["status"] = "cancelled";
  ctx.put_json(appt_key(appt_id), appt);
  return appt;
}

Json file_complaint(TxContext& ctx, const Json& args) {
  auto subject = arg_string(args, 0, "subject");
  auto body = arg_string(args, 1, "body");
  auto severity_text = arg_string(args, 2, "severity");
  auto severity = parse_severity(severity_text);
  if (!severity) fail(ErrorKind::Validation, "severity must be low, medium or high");
  auto id = ctx.derive_id("complaint");
  Json complaint{{"body", body},
                 {"complaint_id", id},
                 {"filed_at", ctx.now_ms()},
                 {"patient_id", ctx.invoker().identity_id},
                 {"severity", to_string(*severity)},
                 {"status", "open"},
                 {"subject", subject}};
  ctx.put_json(complaint_key(id), complaint);
  return complaint;
}

Json get_complaint_status(TxContext& ctx, const Json& args) {
  auto id = arg_string(args, 0, "complaint_id");
  auto complaint = require_entity(ctx, complaint_key(id), "complaint");
  const auto& inv = ctx.invoker();
  if (inv.stakeholder == S::Nagorik && complaint["patient_id"] != inv.identity_id) {
    deny("complaints are visible to their owner and the authority only");
  }
  std::vector<ComplaintKey> unresolved;
  for (const auto& [key, c] : ctx.scan_json("health/complaint/")) {
    if (c["status"] == "resolved") continue;
    unresolved.push_back({c["complaint_id"].get<std::string>(), *parse_severity(c["severity"].get<std::string>()),
                          c["filed_at"].get<std::int64_t>()});
  }
  auto ranks = rank_complaints(std::move(unresolved));
  Json rank = nullptr;
  if (auto it = ranks.find(id); it != ranks.end()) rank = it->second;
  return Json{{"complaint_id", id},
              {"filed_at", complaint["filed_at"]},
              {"priority_rank", rank},
              {"severity", complaint["severity"]},
              {"status", complaint["status"]},
              {"subject", complaint["subject"]}};
}

Json review_complaint(TxContext& ctx, const Json& args) {
  auto id = arg_string(args, 0, "complaint_id");
  auto action = arg_string(args, 1, "action");
  auto complaint = require_entity(ctx, complaint_key(id), "complaint");
  auto status = complaint["status"].get<std::string>();
  if (action == "review" && status == "open") {
    complaint["status"] = "in_review";
  } else if (action == "resolve" && status == "in_review") {
    complaint["status"] = "resolved";
  } else if (action != "review" && action != "resolve") {
    fail(ErrorKind::Validation, "action must be 'review' or 'resolve'");
  } else {
    fail(ErrorKind::InvalidTransition, "cannot " + action + " a complaint that is " + status);
  }
  ctx.put_json(complaint_key(id), complaint);
  return complaint;
}

Json record_distribution(TxContext& ctx, const Json& args) {
  const auto& r = arg_object(args, 0, "record");
  auto medicine_id = field_string(r, "medicine_id");
  auto facility = field_string(r, "facility");
  auto q = r.find("quantity");
  if (q == r.end() || !q->is_number_integer() || q->get<std::int64_t>() <= 0) {
    fail(ErrorKind::Validation, "quantity must be a positive integer");
  }
  if (!ctx.get(medicine_key(medicine_id))) fail(ErrorKind::UnknownMedicine, "no medicine '" + medicine_id + "'");
  auto id = ctx.derive_id("distribution");
  Json record{{"at", ctx.now_ms()},         {"facility", facility},
              {"medicine_id", medicine_id}, {"quantity", q->get<std::int64_t>()},
              {"record_id", id},            {"recorded_by", ctx.invoker().identity_id}};
  ctx.put_json(distribution_key(id), record);
  return record;
}

Json prescribing_tendency(TxContext& ctx, const Json& args) {
  auto doctor_id = arg_string(args, 0, "doctor_id");
  auto counts = Json::object();
  for (const auto& [key, rx] : ctx.scan_json("health/rx/")) {
    if (rx["doctor_id"] != doctor_id) continue;
    for (const auto& item : rx["items"]) {
      auto m = item["medicine_id"].get<std::string>();
      counts[m] = counts.value(m, 0) + 1;
    }
  }
  return counts;
}

Json anonymized_stats(TxContext& ctx, const Json& args) {
  auto group_by = arg_string(args, 0, "group_by");
  if (group_by != "specialty" && group_by != "medicine") {
    fail(ErrorKind::Validation, "group_by must be 'specialty' or 'medicine'");
  }
  std::map<std::string, std::string> specialty_of;
  if (group_by == "specialty") {
    for (const auto& [key, d] : ctx.scan_json("health/doctor/")) {
      specialty_of[d["doctor_id"].get<std::string>()] = d["specialty"].get<std::string>();
    }
  }
  struct Group {
    std::int64_t prescriptions = 0;
    std::set<std::string> patients;
  };
  std::map<std::string, Group> groups;
  for (const auto& [key, rx] : ctx.scan_json("health/rx/")) {
    auto patient = rx["patient_id"].get<std::string>();
    if (group_by == "specialty") {
      auto it = specialty_of.find(rx["doctor_id"].get<std::string>());
      auto& g = groups[it == specialty_of.end() ? "unknown" : it->second];
      g.prescriptions += 1;
      g.patients.insert(patient);
    } else {
      for (const auto& item : rx["items"]) {
        auto& g = groups[item["medicine_id"].get<std::string>()];
        g.prescriptions += 1;
        g.patients.insert(patient);
      }
    }
  }
  auto out = Json::object();
  for (const auto& [name, g] : groups) {
    if (g.patients.size() < kAnonymityThreshold) {
      out[name] = "suppressed";
    } else {
      out[name] = Json{{"patients", g.patients.size()}, {"prescriptions", g.prescriptions}};
    }
  }
  return Json{{"group_by", group_by}, {"groups", std::move(out)}, {"k", kAnonymityThreshold}};
}

Json post_news(TxContext& ctx, const Json& args) {
  const auto& item = arg_object(args, 0, "item");
  auto id = ctx.derive_id("news");
  Json news{{"at", ctx.now_ms()},
            {"body", field_string(item, "body")},
            {"news_id", id},
            {"published_by", ctx.invoker().identity_id},
            {"title", field_string(item, "title")}};
  ctx.put_json(news_key(id), news);
  return news;
}

Json get_news(TxContext& ctx, const Json&) {
  std::vector<Json> items;
  for (auto& [key, n] : ctx.scan_json("health/news/")) items.push_back(std::move(n));
  std::sort(items.begin(), items.end(), [](const Json& a, const Json& b) {
    if (a["at"] != b["at"]) return a["at"].get<std::int64_t>() > b["at"].get<std::int64_t>();
    return a["news_id"].get<std::string>() < b["news_id"].get<std::string>();
  });
  return Json(items);
}

// ---- identity system contract ------------------------------------------------

Json identity_register(TxContext& ctx, const Json& args) {
  auto identity_id = arg_string(args, 0, "identity_id");
  const auto& record = arg_object(args, 1, "record");
  const auto& inv = ctx.invoker();
  auto key = "identity/" + inv.org + "/" + identity_id;
  if (ctx.get(key)) fail(ErrorKind::DuplicateIdentity, "identity '" + identity_id + "' already registered");
  if (!record.contains("password")) fail(ErrorKind::Validation, "identity record lacks a password digest");
  ctx.put_json(key, record);
  return Json{{"key", key}};
}

// ---- harness key-value contract -----------------------------------------------

Json kv_put(TxContext& ctx, const Json& args) {
  auto key = arg_string(args, 0, "key");
  auto value = arg_string(args, 1, "value");
  ctx.get("kv/" + key);
  ctx.put("kv/" + key, Json(value).dump());
  return Json{{"key", key}};
}

// ---- dispatch -----------------------------------------------------------------

using Handler = Json (*)(TxContext&, const Json&);

struct Entry {
  FunctionSpec spec;
  Handler handler;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      {{"health.register_doctor", {S::Doctor}, false}, register_doctor},
      {{"health.approve_doctor", {S::Authority}, false}, approve_doctor},
      {{"health.submit_credential_update", {S::Doctor}, false}, submit_credential_update},
      {{"health.approve_credential", {S::Authority}, false}, approve_credential},
      {{"health.get_doctor", kAnyone, true}, get_doctor},
      {{"health.find_specialist", kAnyone, true}, find_specialist},
      {{"health.add_medicine", {S::Authority}, false}, add_medicine},
      {{"health.set_medicine_authorized", {S::Authority}, false}, set_medicine_authorized},
      {{"health.list_medicines", kAnyone, true}, list_medicines},
      {{"health.upsert_patient", {S::Nagorik}, false}, upsert_patient},
      {{"health.grant_consent", {S::Nagorik}, false}, grant_consent},
      {{"health.create_prescription", {S::Doctor}, false}, create_prescription},
      {{"health.add_test_result", {S::Doctor}, false}, add_test_result},
      {{"health.get_medical_history", {S::Doctor, S::Nagorik}, true}, get_medical_history},
      {{"health.request_appointment", {S::Nagorik}, false}, request_appointment},
      {{"health.confirm_appointment", {S::Nagorik, S::Doctor}, false}, confirm_appointment},
      {{"health.cancel_appointment", {S::Nagorik, S::Doctor}, false}, cancel_appointment},
      {{"health.file_complaint", {S::Nagorik}, false}, file_complaint},
      {{"health.get_complaint_status", {S::Nagorik, S::Authority}, true}, get_complaint_status},
      {{"health.review_complaint", {S::Authority}, false}, review_complaint},
      {{"health.record_distribution", {S::Authority}, false}, record_distribution},
      {{"health.prescribing_tendency", {S::Authority}, true}, prescribing_tendency},
      {{"health.anonymized_stats", {S::Authority}, true}, anonymized_stats},
      {{"health.post_news", {S::Authority}, false}, post_news},
      {{"health.get_news", kAnyone, true}, get_news},
      {{"identity.register", {S::Admin}, false}, identity_register},
      {{"kv.put", {S::Admin}, false}, kv_put},
  };
  return table;
}

const Entry* find_entry(std::string_view name) {
  for (const auto& e : entries()) {
    if (e.spec.name == name) return &e;
  }
  return nullptr;
}

}  // namespace

const std::vector<FunctionSpec>& function_table() {
  static const std::vector<FunctionSpec> specs = [] {
    std::vector<FunctionSpec> out;
    for (const auto& e : entries()) out.push_back(e.spec);
    return out;
  }();
  return specs;
}

const FunctionSpec* find_function(std::string_view name) {
  const auto* e = find_entry(name);
  return e ? &e->spec : nullptr;
}

bool is_query(std::string_view name) {
  const auto* spec = find_function(name);
  return spec && spec->query;
}

Json invoke(std::string_view fn, TxContext& ctx, const Json& args) {
  const auto* e = find_entry(fn);
  if (!e) fail(ErrorKind::Chaincode, "unknown contract function '" + std::string(fn) + "'");
  if (!e->spec.allowed.contains(ctx.invoker().stakeholder)) {
    fail(ErrorKind::Authorization, std::string(to_string(ctx.invoker().stakeholder)) + " may not call " +
                                       std::string(fn));
  }
  if (!args.is_array()) fail(ErrorKind::Validation, "contract arguments must be an array");
  return e->handler(ctx, args);
}

}  // namespace hl::chaincode
