#pragma once

#include <memory>
#include <string>

namespace fundalloc::net {

struct HttpResponse {
    int status = 0;
    std::string body;
};

// Minimal POST-only transport so providers can be exercised against fakes.
class HttpTransport {
public:
    virtual ~HttpTransport() = default;

    // POSTs `body` as application/json to base_url + path, sending
    // `Authorization: Bearer <api_key>` when api_key is non-empty.
    // Throws Error(provider) on connection-level failures; HTTP status
    // handling is the caller's job.
    virtual HttpResponse post_json(const std::string& base_url, const std::string& path,
                                   const std::string& body, const std::string& api_key,
                                   int timeout_s) = 0;
};

// httplib-backed implementation.
std::shared_ptr<HttpTransport> make_httplib_transport();

}  // namespace fundalloc::net
