#include "dicke/provenance.hpp"

#include <openssl/evp.h>

#include <cstdio>

#include "dicke/errors.hpp"

namespace dicke {

std::string sha256_hex(const void* data, std::size_t size) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int digest_len = 0;
    if (EVP_Digest(data, size, digest, &digest_len, EVP_sha256(), nullptr) != 1)
        throw FormatError("SHA-256 digest computation failed");

    static const char* hex = "0123456789abcdef";
    std::string out(2 * digest_len, '0');
    for (unsigned int i = 0; i < digest_len; ++i) {
        out[2 * i] = hex[digest[i] >> 4];
        out[2 * i + 1] = hex[digest[i] & 0xf];
    }
    return out;
}

std::string sha256_hex(const std::string& data) { return sha256_hex(data.data(), data.size()); }

std::string canonical_param_string(const ModelParams& params, Sector sector) {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "omega=%.17g;omega0=%.17g;gamma=%.17g;kappa=%.17g;two_j=%d;n_max=%d",
                  params.omega, params.omega0, params.gamma, params.kappa, params.two_j,
                  params.n_max);
    return std::string(buf) + ";sector=" + to_string(sector) +
           ";format=" + std::to_string(kFormatVersion);
}

std::string params_hash(const ModelParams& params, Sector sector) {
    return sha256_hex(canonical_param_string(params, sector));
}

}  // namespace dicke
