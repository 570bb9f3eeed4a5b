#include "shp/protocol.hpp"

#include "shp/ecc.hpp"
#include "shp/errors.hpp"
#include "shp/hashing.hpp"

namespace shp {

Bits frame_payload(const Bits& message) {
    Bits payload = bits_from_uint(message.size(), 32);
    payload.insert(payload.end(), message.begin(), message.end());
    return payload;
}

Bits wire_bits_for(const Bits& message, const ChannelConfig& cfg) {
    Bits payload = frame_payload(message);
    if (cfg.ecc == EccVariant::InlineHammingPlus)
        return ecc::inline_expand(payload, cfg.bitlength);
    return payload;
}

namespace {

std::vector<Bits> cut_fragments(const Bits& wire, int n) {
    std::vector<Bits> frags;
    const auto un = static_cast<std::size_t>(n);
    frags.reserve((wire.size() + un - 1) / un);
    for (std::size_t off = 0; off < wire.size(); off += un) {
        Bits f(un, 0);
        for (std::size_t i = 0; i < un && off + i < wire.size(); ++i) f[i] = wire[off + i];
        frags.push_back(std::move(f));
    }
    return frags;
}

} // namespace

Sender::Sender(const ChannelConfig& cfg, const Bits& message, SenderOptions opt)
    : cfg_(cfg), opt_(opt) {
    cfg_.validate();
    if (message.empty()) throw InvalidParameter("Sender: empty message");
    fragments_ = cut_fragments(wire_bits_for(message, cfg_), cfg_.bitlength);
    targets_.reserve(fragments_.size());
    const EccVariant match_variant =
        (cfg_.ecc == EccVariant::Hamming || cfg_.ecc == EccVariant::HammingPlus) ? cfg_.ecc
                                                                                 : EccVariant::None;
    for (const auto& f : fragments_)
        targets_.push_back(match_variant == EccVariant::None ? f
                                                             : ecc::encode_fragment(f, match_variant));
    sent_.assign(fragments_.size(), false);
    n_cmp_ = ecc::match_width(cfg_.bitlength, cfg_.ecc);
}

std::vector<PointerSignal> Sender::begin(Microseconds ts) {
    if (state_.started) throw ProtocolError("Sender: START already emitted");
    state_.on_start(ts);
    handshake_left_ = opt_.start_repeats;
    skip_next_pdu_ = true;
    PointerSignal sig;
    sig.type = SignalType::Start;
    sig.emit_ts = ts + opt_.processing_delay_us;
    ++stats_.signals_sent[SignalType::Start];
    return {sig};
}

void Sender::mark_sent(std::size_t idx) {
    if (!sent_[idx]) {
        sent_[idx] = true;
        ++fragments_sent_;
    }
    while (base_ < sent_.size() && sent_[base_]) ++base_;
}

std::optional<PointerSignal> Sender::try_match(const PduRecord& pdu) {
    const auto maybe_value = input_value(state_, pdu, cfg_);
    if (!maybe_value) return std::nullopt;
    const InputValue& value = *maybe_value;

    const std::uint32_t window = 1u << cfg_.oood_bits;
    const std::uint32_t iterations = 1u << cfg_.rehash_bits;

    // Lowest window offset wins, then lowest rehash iteration. Deskew words
    // depend only on the iteration, so cache them across offsets.
    std::vector<Bits> words(iterations);
    std::vector<bool> have(iterations, false);
    for (std::uint32_t off = 0; off < window; ++off) {
        const std::size_t idx = base_ + off;
        if (idx >= fragments_.size() || sent_[idx]) continue;
        for (std::uint32_t it = 0; it < iterations; ++it) {
            if (!have[it]) {
                words[it] = deskew_hash_bits(value.rounded, value.subchannel, cfg_.shared_key,
                                             static_cast<std::size_t>(n_cmp_), it);
                have[it] = true;
            }
            if (ecc::near_match(words[it], targets_[idx], cfg_.ecc)) {
                PointerSignal sig;
                sig.type = SignalType::Data;
                sig.rehash_count = it;
                sig.oood_seq = cfg_.oood_bits == 0
                                   ? 0u
                                   : static_cast<std::uint32_t>(idx) & ((1u << cfg_.oood_bits) - 1u);
                sig.watchdog = watchdog_checksum(fragments_[idx], cfg_.shared_key);
                sig.emit_ts = pdu.timestamp + opt_.processing_delay_us;
                last_emitted_ = idx;
                mark_sent(idx);
                return sig;
            }
        }
    }
    return std::nullopt;
}

std::vector<PointerSignal> Sender::on_pdu(const PduRecord& pdu, bool poi) {
    if (!state_.started) throw ProtocolError("Sender: begin() not called");
    if (skip_next_pdu_) { // PDU sharing the START timestamp is pre-START
        skip_next_pdu_ = false;
        return {};
    }
    if (stopped_) return {};
    ++stats_.pdus_seen;
    if (!poi) return {};

    std::vector<PointerSignal> out;
    const std::uint32_t sc = subchannel_of(pdu, cfg_, state_.last_global_poi_ts);

    if (handshake_left_ > 0) {
        // Handshake POIs carry START re-emissions and are recorded in
        // history but are not match attempts.
        --handshake_left_;
        state_.record_poi(pdu, sc);
        PointerSignal sig;
        sig.type = SignalType::Start;
        sig.emit_ts = pdu.timestamp + opt_.processing_delay_us;
        ++stats_.signals_sent[SignalType::Start];
        out.push_back(sig);
        return out;
    }

    ++stats_.pois_observed;
    if (!message_complete()) {
        auto sig = try_match(pdu);
        state_.record_poi(pdu, sc);
        if (sig) {
            ++stats_.matches;
            ++stats_.signals_sent[SignalType::Data];
            state_.on_signal(pdu.timestamp); // anchor in POI-time domain
            out.push_back(*sig);
        }
    } else {
        state_.record_poi(pdu, sc);
    }

    if (message_complete() && !stopped_) {
        stopped_ = true;
        PointerSignal stop;
        stop.type = SignalType::Stop;
        stop.emit_ts = pdu.timestamp + opt_.processing_delay_us;
        ++stats_.signals_sent[SignalType::Stop];
        out.push_back(stop);
    }
    return out;
}

void Sender::on_retry() {
    if (stopped_ || !last_emitted_) return;
    const std::size_t idx = *last_emitted_;
    if (sent_[idx]) {
        sent_[idx] = false;
        --fragments_sent_;
        if (idx < base_) base_ = idx;
    }
    ++stats_.retries_honored;
}

Receiver::Receiver(const ChannelConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    n_cmp_ = ecc::match_width(cfg_.bitlength, cfg_.ecc);
}

void Receiver::on_pdu(const PduRecord& pdu, bool poi) {
    ++stats_.pdus_seen;
    if (!state_.started || !poi) return;
    ++stats_.pois_observed;
    const std::uint32_t sc = subchannel_of(pdu, cfg_, state_.last_global_poi_ts);
    if (cfg_.inputsource == InputSource::Ipd)
        last_poi_value_ = input_value(state_, pdu, cfg_);
    last_poi_subchannel_ = sc;
    state_.record_poi(pdu, sc);
}

std::size_t Receiver::place_index(std::uint32_t oood_seq) const {
    if (cfg_.oood_bits == 0) return base_;
    const std::uint32_t mod = 1u << cfg_.oood_bits;
    const std::uint32_t base_mod = static_cast<std::uint32_t>(base_) & (mod - 1u);
    return base_ + ((oood_seq - base_mod + mod) & (mod - 1u));
}

SignalOutcome Receiver::on_signal(const PointerSignal& sig, Microseconds arrival_ts,
                                  bool strict) {
    SignalOutcome out;
    if (sig.type == SignalType::Start) {
        if (!state_.started) {
            state_.on_start(arrival_ts);
            out.kind = SignalOutcome::Kind::Started;
        }
        return out; // duplicate STARTs are ignored, anchors set once
    }
    if (!state_.started) {
        if (strict) throw ProtocolError("Receiver: signal before START");
        ++stats_.pre_start_signals;
        return out;
    }
    if (sig.type == SignalType::Stop) {
        stats_.stop_received = true;
        out.kind = SignalOutcome::Kind::Stopped;
        return out;
    }
    if (sig.type == SignalType::Retry) return out; // sender-directed, not ours

    ++stats_.data_received;
    const auto value =
        pointer_input_value(state_, arrival_ts, cfg_, last_poi_value_, last_poi_subchannel_);
    // The pointer is itself a signal observation: resynchronize anchors no
    // matter whether the fragment is accepted.
    state_.on_signal(arrival_ts);

    auto reject = [&](bool undecodable) {
        if (undecodable)
            ++stats_.fragments_failed;
        else
            ++stats_.retries_sent;
        PointerSignal retry;
        retry.type = SignalType::Retry;
        retry.emit_ts = arrival_ts;
        out.kind = SignalOutcome::Kind::Rejected;
        out.retry = retry;
    };

    if (!value) {
        reject(true);
        return out;
    }

    const Bits word = deskew_hash_bits(value->rounded, value->subchannel, cfg_.shared_key,
                                       static_cast<std::size_t>(n_cmp_), sig.rehash_count);
    Bits data;
    ecc::DecodeStatus status;
    if (cfg_.ecc == EccVariant::Hamming || cfg_.ecc == EccVariant::HammingPlus) {
        auto decoded = ecc::decode_fragment(word, cfg_.bitlength, cfg_.ecc);
        data = std::move(decoded.first);
        status = decoded.second;
    } else {
        data = word;
    }
    if (!status.accepted()) {
        reject(true);
        return out;
    }
    if (watchdog_checksum(data, cfg_.shared_key) != sig.watchdog) {
        reject(false);
        return out;
    }

    const std::size_t idx = place_index(sig.oood_seq);
    if (fragments_.count(idx))
        ++stats_.duplicates; // keep first
    else
        fragments_.emplace(idx, std::move(data));
    while (fragments_.count(base_)) ++base_;
    if (status.corrected())
        ++stats_.fragments_corrected;
    else
        ++stats_.fragments_ok;
    out.kind = SignalOutcome::Kind::Stored;
    out.fragment_index = idx;
    return out;
}

ReceivedMessage Receiver::finalize() const {
    ReceivedMessage rm;
    const int n = cfg_.bitlength;
    const std::size_t highest = fragments_.empty() ? 0 : fragments_.rbegin()->first + 1;

    // Wire stream with a per-bit known mask.
    Bits wire(highest * static_cast<std::size_t>(n), 0);
    std::vector<std::uint8_t> wire_known(wire.size(), 0);
    for (const auto& [idx, data] : fragments_)
        for (std::size_t i = 0; i < data.size(); ++i) {
            wire[idx * static_cast<std::size_t>(n) + i] = data[i];
            wire_known[idx * static_cast<std::size_t>(n) + i] = 1;
        }

    if (cfg_.ecc == EccVariant::InlineHammingPlus) {
        const int cw_len = ecc::codeword_length(n, EccVariant::HammingPlus);
        const std::size_t codewords = wire.size() / static_cast<std::size_t>(cw_len);
        rm.payload.assign(codewords * static_cast<std::size_t>(n), 0);
        rm.known.assign(rm.payload.size(), 0);
        for (std::size_t c = 0; c < codewords; ++c) {
            const std::size_t off = c * static_cast<std::size_t>(cw_len);
            bool complete = true;
            for (int i = 0; i < cw_len; ++i)
                complete = complete && wire_known[off + static_cast<std::size_t>(i)];
            if (!complete) {
                ++rm.inline_codewords_failed;
                continue;
            }
            Bits cw(wire.begin() + static_cast<std::ptrdiff_t>(off),
                    wire.begin() + static_cast<std::ptrdiff_t>(off) + cw_len);
            auto [data, status] = ecc::decode_fragment(cw, n, EccVariant::HammingPlus);
            if (!status.accepted()) {
                ++rm.inline_codewords_failed;
                continue;
            }
            if (status.corrected())
                ++rm.inline_codewords_corrected;
            else
                ++rm.inline_codewords_ok;
            for (int i = 0; i < n; ++i) {
                rm.payload[c * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] =
                    data[static_cast<std::size_t>(i)];
                rm.known[c * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] = 1;
            }
        }
    } else {
        rm.payload = std::move(wire);
        rm.known = std::move(wire_known);
    }

    // Recover the message once the 32-bit length header is fully known; the
    // header also pins the expected fragment count for missing-index
    // reporting (OOOD losses can otherwise hide past the highest arrival).
    std::size_t expected_fragments = fragments_.empty() ? 0 : fragments_.rbegin()->first + 1;
    if (rm.payload.size() >= 32) {
        bool header_known = true;
        for (std::size_t i = 0; i < 32; ++i) header_known = header_known && rm.known[i];
        if (header_known) {
            const auto msg_len = static_cast<std::size_t>(
                bits_to_uint(Bits(rm.payload.begin(), rm.payload.begin() + 32)));
            const std::size_t payload_bits = 32 + msg_len;
            const auto un = static_cast<std::size_t>(n);
            std::size_t wire_len;
            if (cfg_.ecc == EccVariant::InlineHammingPlus) {
                const auto cw_len = static_cast<std::size_t>(
                    ecc::codeword_length(n, EccVariant::HammingPlus));
                wire_len = ((payload_bits + un - 1) / un) * cw_len;
            } else {
                wire_len = payload_bits;
            }
            expected_fragments = std::max(expected_fragments, (wire_len + un - 1) / un);
            if (rm.payload.size() >= payload_bits) {
                bool all_known = true;
                for (std::size_t i = 32; i < payload_bits; ++i)
                    all_known = all_known && rm.known[i];
                if (all_known)
                    rm.message = Bits(rm.payload.begin() + 32,
                                      rm.payload.begin() + 32 + static_cast<std::ptrdiff_t>(msg_len));
            }
        }
    }
    for (std::size_t i = 0; i < expected_fragments; ++i)
        if (!fragments_.count(i)) rm.missing_fragments.push_back(i);
    return rm;
}

} // namespace shp
