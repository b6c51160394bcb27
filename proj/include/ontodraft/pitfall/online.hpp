#pragma once

#include <optional>
#include <string>

#include <httplib.h>

#include "ontodraft/pitfall/scan.hpp"
#include "ontodraft/rdf/ontology.hpp"

namespace ontodraft::pitfall {

struct OnlineCheckResult {
    std::optional<PitfallFinding> finding;
    std::string note;  // set when the check could not be performed
};

/// One bounded HEAD request against the ontology IRI. Non-2xx/3xx responses
/// yield a P37 finding; transport problems downgrade to a note, never a crash.
inline OnlineCheckResult check_p37_online(const rdf::Ontology& o, double timeout_s = 5.0) {
    OnlineCheckResult result;
    if (!o.ontology_iri) {
        result.note = "P37 online check skipped: no ontology IRI";
        return result;
    }
    const std::string& url = o.ontology_iri->value;
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        result.note = "P37 online check skipped: ontology IRI is not a fetchable URL";
        return result;
    }
    std::string scheme = url.substr(0, scheme_end);
    auto path_start = url.find('/', scheme_end + 3);
    std::string host = url.substr(scheme_end + 3,
                                  path_start == std::string::npos ? std::string::npos
                                                                  : path_start - scheme_end - 3);
    std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
    auto hash = path.find('#');
    if (hash != std::string::npos) path = path.substr(0, hash);
    if (path.empty()) path = "/";

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (scheme == "https") {
        result.note = "P37 not checked: https not supported in this build";
        return result;
    }
#endif
    if (scheme != "http" && scheme != "https") {
        result.note = "P37 not checked: unsupported scheme '" + scheme + "'";
        return result;
    }

    httplib::Client client((scheme + "://" + host).c_str());
    client.set_connection_timeout(static_cast<time_t>(timeout_s),
                                  static_cast<time_t>((timeout_s - static_cast<time_t>(timeout_s)) * 1e6));
    client.set_read_timeout(static_cast<time_t>(timeout_s), 0);
    client.set_follow_location(true);

    auto res = client.Head(path.c_str());
    if (!res) {
        result.note = "P37 not checked: " + httplib::to_string(res.error());
        return result;
    }
    if (res->status >= 200 && res->status < 400) return result;
    result.finding = PitfallFinding{
        "P37",
        {url},
        "ontology IRI answered HTTP " + std::to_string(res->status) + " to a HEAD request"};
    return result;
}

}  // namespace ontodraft::pitfall
