#pragma once

#include <memory>
#include <mutex>
#include <string>

#include <httplib.h>

#include "pmsleuth/evm/behavior.hpp"
#include "pmsleuth/json.hpp"

namespace pmsleuth::evm {

/// Splits "http://host:port/path" into (scheme://host:port, /path).
inline std::pair<std::string, std::string> split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    auto path_start = url.find('/', host_start);
    if (path_start == std::string::npos)
        return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

/// JSON-RPC client for eth_getStorageAt. Safe for concurrent use; requests
/// are serialized over one connection.
class StorageRpc {
public:
    explicit StorageRpc(std::string url) : url_(std::move(url)) {
        auto [base, path] = split_url(url_);
        path_ = path;
        client_ = std::make_unique<httplib::Client>(base);
        client_->set_connection_timeout(10);
        client_->set_read_timeout(30);
    }

    const std::string& url() const { return url_; }

    /// Storage word at `slot` of `contract` at the latest block.
    Word get_storage_at(const Address& contract, const Word& slot) {
        Json req;
        req["jsonrpc"] = "2.0";
        req["id"] = 1;
        req["method"] = "eth_getStorageAt";
        req["params"] = Json::array({contract.hex(), slot.hex(), "latest"});

        httplib::Result res;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            res = client_->Post(path_, req.dump(), "application/json");
        }
        if (!res)
            throw RpcTransportError("eth_getStorageAt transport failure: " +
                                        httplib::to_string(res.error()),
                                    url_, slot.hex());
        if (res->status != 200)
            throw RpcTransportError("eth_getStorageAt HTTP " + std::to_string(res->status),
                                    url_, slot.hex());

        Json body = Json::parse(res->body, nullptr, false);
        if (body.is_discarded() || !body.contains("result") || !body["result"].is_string())
            throw RpcProtocolError("eth_getStorageAt returned a malformed body");
        try {
            Bytes raw = from_hex(body["result"].get<std::string>());
            // Nodes may return short words; left-pad to 32 bytes.
            if (raw.size() > 32)
                throw RpcProtocolError("storage word longer than 32 bytes");
            Word w;
            std::copy(raw.begin(), raw.end(), w.bytes.end() - raw.size());
            return w;
        } catch (const HexError& e) {
            throw RpcProtocolError(std::string("non-hex storage word: ") + e.what());
        }
    }

private:
    std::string url_;
    std::string path_;
    std::unique_ptr<httplib::Client> client_;
    std::mutex mutex_;
};

/// Resolves a StorageSlot callee through eth_getStorageAt: the low-order 20
/// bytes of the stored word, or Unresolved when the word is zero.
inline CalleeResolution resolve_storage_callee(const ExternalCallSite& site,
                                               const Address& contract, StorageRpc& rpc) {
    const auto* ref = std::get_if<StorageSlotRef>(&site.callee);
    if (!ref)
        throw Error("resolve_storage_callee called on a non-storage callee");
    Word w = rpc.get_storage_at(contract, ref->slot);
    Address a = address_from_word(w);
    if (a.is_zero())
        return UnresolvedCallee{};
    return ConstantAddress{a};
}

} // namespace pmsleuth::evm
