#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <openssl/evp.h>

#include <fstream>
#include <ostream>
#include <regex>
#include <stdexcept>

#include "fetch.hpp"

namespace causality::detail {

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::filesystem::path fetch_url(const std::string& url, const std::string& sha256, const std::filesystem::path& dir,
                                std::ostream& err) {
  static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) throw std::runtime_error("unsupported URL: " + url);
  const std::string base = m[1].str();
  const std::string path = m[2].matched ? m[2].str() : "/";

  httplib::Client client(base);
  client.set_follow_location(true);
  client.set_connection_timeout(30);
  client.set_read_timeout(300);
  auto res = client.Get(path);
  if (!res) throw std::runtime_error("download failed: " + httplib::to_string(res.error()));
  if (res->status != 200) throw std::runtime_error("download failed: HTTP " + std::to_string(res->status));

  const std::string digest = sha256_hex(res->body);
  if (!sha256.empty() && digest != sha256)
    throw std::runtime_error("checksum mismatch: expected " + sha256 + ", got " + digest);
  if (sha256.empty()) err << "warning: no checksum pinned; sha256 of the download is " << digest << "\n";

  std::string name = path.substr(path.find_last_of('/') + 1);
  if (const auto q = name.find('?'); q != std::string::npos) name.resize(q);
  if (name.empty()) name = "download";
  std::filesystem::create_directories(dir);
  const auto target = dir / name;
  const auto tmp = dir / (name + ".part");
  {
    std::ofstream f(tmp, std::ios::binary);
    f.write(res->body.data(), static_cast<std::streamsize>(res->body.size()));
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
  std::ofstream(dir / (name + ".sha256")) << digest << "  " << name << "\n";
  return target;
}

}  // namespace causality::detail
