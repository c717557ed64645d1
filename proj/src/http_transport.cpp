#include "fundalloc/http_transport.hpp"

#include "httplib.h"

#include "fundalloc/error.hpp"

namespace fundalloc::net {

namespace {

class HttplibTransport : public HttpTransport {
public:
    HttpResponse post_json(const std::string& base_url, const std::string& path,
                           const std::string& body, const std::string& api_key,
                           int timeout_s) override {
        httplib::Client client(base_url);
        client.set_connection_timeout(timeout_s, 0);
        client.set_read_timeout(timeout_s, 0);
        client.set_write_timeout(timeout_s, 0);

        httplib::Headers headers;
        if (!api_key.empty()) {
            headers.emplace("Authorization", "Bearer " + api_key);
        }

        auto result = client.Post(path, headers, body, "application/json");
        if (!result) {
            const auto err = result.error();
            if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
                err == httplib::Error::Write) {
                throw Error(ErrorKind::provider, "timeout_error",
                            "request to " + base_url + path + " timed out (" +
                                httplib::to_string(err) + ")");
            }
            throw Error(ErrorKind::provider, "provider_error",
                        "transport failure for " + base_url + path + ": " +
                            httplib::to_string(err));
        }
        return HttpResponse{result->status, result->body};
    }
};

}  // namespace

std::shared_ptr<HttpTransport> make_httplib_transport() {
    return std::make_shared<HttplibTransport>();
}

}  // namespace fundalloc::net
