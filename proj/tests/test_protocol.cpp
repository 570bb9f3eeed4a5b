#include <doctest.h>

#include <random>

#include "shp/ecc.hpp"
#include "shp/errors.hpp"
#include "shp/hashing.hpp"
#include "shp/protocol.hpp"

using namespace shp;

namespace {

PduRecord poi_at(Microseconds ts) {
    PduRecord pdu;
    pdu.timestamp = ts;
    pdu.src_mac = MacAddr::parse("02:00:00:00:00:01");
    pdu.dst_mac = MacAddr::broadcast();
    pdu.src_ip = IpAddr::parse("192.168.1.7");
    pdu.dst_ip = IpAddr::parse("192.168.1.255");
    pdu.ether_type = EtherType::Ipv4;
    pdu.length = 100;
    return pdu;
}

// Zero-impairment lockstep harness: the receiver observes the same PDUs and
// every signal arrives at its emission timestamp (PDU processed first).
struct Lockstep {
    Sender sender;
    Receiver receiver;
    std::vector<PointerSignal> wire;

    Lockstep(const ChannelConfig& cfg, const Bits& message, SenderOptions opt = {})
        : sender(cfg, message, opt), receiver(cfg) {}

    void feed(const PduRecord& pdu, bool poi = true) {
        std::vector<PointerSignal> sigs;
        if (!sender.started())
            sigs = sender.begin(pdu.timestamp);
        receiver.on_pdu(pdu, poi);
        auto more = sender.on_pdu(pdu, poi);
        sigs.insert(sigs.end(), more.begin(), more.end());
        for (const auto& sig : sigs) {
            wire.push_back(sig);
            const auto outcome = receiver.on_signal(sig, sig.emit_ts);
            if (outcome.retry) sender.on_retry();
        }
    }
};

} // namespace

TEST_CASE("sender emits exactly one DATA on an engineered matching POI") {
    ChannelConfig cfg;
    cfg.inputsource = InputSource::Isd;
    cfg.bitlength = 4;
    cfg.epsilon_places = 6;
    cfg.ecc = EccVariant::None;
    cfg.silence_ms = 0;
    cfg.shared_key = "test";

    const Bits message = bits_from_string("1010");
    Sender probe(cfg, message, SenderOptions{0, 0});
    probe.begin(0);
    // First fragment of the wire stream is the high nibble of the 32-bit
    // length header: 0000 for a 4-bit message.
    const Bits target = bits_from_string("0000");

    // Engineer a POI whose ISD value deskews onto the first fragment, and
    // one that does not.
    Microseconds match_ts = 0, miss_ts = 0;
    for (Microseconds t = 1; t < 4000; ++t) {
        const Bits w = deskew_hash_bits(t, 0, cfg.shared_key, 4, 0);
        if (w == target && match_ts == 0) match_ts = t;
        if (w != target && miss_ts == 0) miss_ts = t;
        if (match_ts && miss_ts) break;
    }
    REQUIRE(match_ts > 0);
    REQUIRE(miss_ts > 0);

    SUBCASE("matching POI fires, rehash_count 0") {
        Sender s(cfg, message, SenderOptions{0, 0});
        s.begin(0);
        auto none = s.on_pdu(poi_at(0), true); // consumed as the pre-START PDU
        CHECK(none.empty());
        auto sigs = s.on_pdu(poi_at(match_ts), true);
        REQUIRE(sigs.size() == 1);
        CHECK(sigs[0].type == SignalType::Data);
        CHECK(sigs[0].rehash_count == 0);
        CHECK(sigs[0].oood_seq == 0);
        CHECK(s.stats().matches == 1);
    }
    SUBCASE("non-matching POI stays silent") {
        Sender s(cfg, message, SenderOptions{0, 0});
        s.begin(0);
        s.on_pdu(poi_at(0), true);
        CHECK(s.on_pdu(poi_at(miss_ts), true).empty());
        CHECK(s.stats().matches == 0);
    }
}

TEST_CASE("same trace, same config: identical signal sequence") {
    ChannelConfig cfg;
    cfg.inputsource = InputSource::Icd;
    cfg.bitlength = 2;
    cfg.epsilon_places = 6;
    cfg.silence_ms = 0;

    std::mt19937_64 rng(21);
    std::vector<PduRecord> pdus;
    Microseconds t = 0;
    for (int i = 0; i < 600; ++i) {
        t += 1000 + static_cast<Microseconds>(rng() % 12000);
        pdus.push_back(poi_at(t));
    }
    const Bits message = random_bits(24, rng);

    auto run = [&]() {
        Sender s(cfg, message, SenderOptions{0, 2});
        std::vector<PointerSignal> sigs;
        bool first = true;
        for (const auto& pdu : pdus) {
            if (first) {
                auto b = s.begin(pdu.timestamp);
                sigs.insert(sigs.end(), b.begin(), b.end());
                first = false;
            }
            auto out = s.on_pdu(pdu, true);
            sigs.insert(sigs.end(), out.begin(), out.end());
        }
        return sigs;
    };
    CHECK(run() == run());
}

TEST_CASE("lockstep delivery: message reconstructed exactly (ICD, n=4)") {
    ChannelConfig cfg;
    cfg.inputsource = InputSource::Icd;
    cfg.bitlength = 4;
    cfg.epsilon_places = 6;
    cfg.silence_ms = 0;

    std::mt19937_64 rng(33);
    const Bits message = random_bits(64, rng);
    Lockstep link(cfg, message);

    Microseconds t = 0;
    for (int i = 0; i < 4000 && !link.sender.stopped(); ++i) {
        t += 1000 + static_cast<Microseconds>(rng() % 12000);
        link.feed(poi_at(t));
    }
    REQUIRE(link.sender.message_complete());
    CHECK(link.receiver.stats().stop_received);
    CHECK(link.receiver.stats().fragments_failed == 0);
    CHECK(link.receiver.stats().retries_sent == 0);
    const auto rm = link.receiver.finalize();
    REQUIRE(rm.message.has_value());
    CHECK(*rm.message == message);
    CHECK(rm.missing_fragments.empty());
}

TEST_CASE("lockstep symmetry holds across sources, bitlengths, ECC, rehash, oood") {
    std::mt19937_64 rng(55);
    const std::vector<InputSource> sources{InputSource::Ipd,       InputSource::Isd,
                                           InputSource::Icd,       InputSource::Ispn,
                                           InputSource::Timestamp, InputSource::Icpn};
    struct Extra {
        int m, s;
    };
    const std::vector<Extra> extras{{0, 0}, {2, 0}, {0, 2}, {2, 2}};

    for (InputSource source : sources) {
        for (int n : {2, 3, 4, 8}) {
            for (EccVariant ecc : {EccVariant::None, EccVariant::Hamming, EccVariant::HammingPlus,
                                   EccVariant::InlineHammingPlus}) {
                if (n == 8 && (ecc == EccVariant::Hamming || ecc == EccVariant::HammingPlus))
                    continue; // 12/13-bit match widths need huge traces; covered at n<=4
                ChannelConfig cfg;
                cfg.inputsource = source;
                cfg.bitlength = n;
                cfg.epsilon_places = source == InputSource::Ispn ? 3 : 6;
                cfg.ecc = ecc;
                cfg.silence_ms = 2;

                const Bits message = random_bits(16, rng);
                Lockstep link(cfg, message);
                Microseconds t = 0;
                for (int i = 0; i < 2500 && !link.sender.stopped(); ++i) {
                    t += 2500 + static_cast<Microseconds>(rng() % 10000);
                    link.feed(poi_at(t));
                }
                const auto& rs = link.receiver.stats();
                const auto& ss = link.sender.stats();
                // Zero jitter and loss: every pointer arrives and verifies.
                CHECK(rs.data_received == ss.matches);
                CHECK(rs.fragments_ok + rs.fragments_corrected == rs.data_received);
                CHECK(rs.fragments_failed == 0);
                CHECK(rs.retries_sent == 0);
                if (link.sender.message_complete()) {
                    const auto rm = link.receiver.finalize();
                    REQUIRE(rm.message.has_value());
                    CHECK(*rm.message == message);
                }
            }
        }
    }

    // Rehash/OOOD combinations on one timing source.
    for (const auto& extra : extras) {
        ChannelConfig cfg;
        cfg.inputsource = InputSource::Isd;
        cfg.bitlength = 4;
        cfg.epsilon_places = 6;
        cfg.rehash_bits = extra.m;
        cfg.oood_bits = extra.s;
        cfg.silence_ms = 2;

        const Bits message = random_bits(16, rng);
        Lockstep link(cfg, message);
        Microseconds t = 0;
        for (int i = 0; i < 2500 && !link.sender.stopped(); ++i) {
            t += 2500 + static_cast<Microseconds>(rng() % 10000);
            link.feed(poi_at(t));
        }
        const auto& rs = link.receiver.stats();
        CHECK(rs.data_received == link.sender.stats().matches);
        CHECK(rs.fragments_failed == 0);
        CHECK(rs.retries_sent == 0);
        if (extra.m > 0 && link.sender.stats().matches > 0) {
            bool saw_any = false;
            for (const auto& sig : link.wire)
                if (sig.type == SignalType::Data) {
                    CHECK(sig.rehash_count < (1u << extra.m));
                    saw_any = true;
                }
            CHECK(saw_any);
        }
        if (link.sender.message_complete()) {
            const auto rm = link.receiver.finalize();
            REQUIRE(rm.message.has_value());
            CHECK(*rm.message == message);
        }
    }
}

TEST_CASE("rehashing raises the per-POI match rate") {
    std::mt19937_64 rng(77);
    auto matches_with = [&](int m) {
        ChannelConfig cfg;
        cfg.inputsource = InputSource::Isd;
        cfg.bitlength = 8;
        cfg.epsilon_places = 6;
        cfg.rehash_bits = m;
        cfg.silence_ms = 0;
        std::mt19937_64 local(99);
        const Bits message = random_bits(4096, local);
        Sender s(cfg, message, SenderOptions{0, 0});
        s.begin(0);
        s.on_pdu(poi_at(0), true);
        Microseconds t = 0;
        for (int i = 0; i < 3000; ++i) {
            t += 1000 + static_cast<Microseconds>(local() % 9000);
            s.on_pdu(poi_at(t), true);
        }
        return s.stats().matches;
    };
    const auto m0 = matches_with(0);
    const auto m4 = matches_with(4);
    CHECK(m4 > 3 * m0); // 16 iterations vs 1; expectation ratio ~16
}

TEST_CASE("watchdog mismatch triggers RETRY and the fragment is retransmitted") {
    ChannelConfig cfg;
    cfg.inputsource = InputSource::Icd;
    cfg.bitlength = 4;
    cfg.epsilon_places = 6;
    cfg.silence_ms = 0;

    std::mt19937_64 rng(88);
    const Bits message = random_bits(8, rng);
    Sender sender(cfg, message, SenderOptions{0, 0});
    Receiver receiver(cfg);

    sender.begin(0);
    receiver.on_pdu(poi_at(0), true);
    sender.on_pdu(poi_at(0), true);
    receiver.on_signal(PointerSignal{SignalType::Start, 0, 0, 0, 0}, 0);

    bool corrupted_once = false;
    Microseconds t = 0;
    for (int i = 0; i < 3000 && !sender.stopped(); ++i) {
        t += 1000 + static_cast<Microseconds>(rng() % 9000);
        const auto pdu = poi_at(t);
        receiver.on_pdu(pdu, true);
        for (auto sig : sender.on_pdu(pdu, true)) {
            if (sig.type == SignalType::Data && !corrupted_once) {
                corrupted_once = true;
                sig.watchdog = static_cast<std::uint8_t>(sig.watchdog ^ 0x3f);
                const auto outcome = receiver.on_signal(sig, sig.emit_ts);
                CHECK(outcome.kind == SignalOutcome::Kind::Rejected);
                REQUIRE(outcome.retry.has_value());
                CHECK(outcome.retry->type == SignalType::Retry);
                sender.on_retry();
            } else {
                const auto outcome = receiver.on_signal(sig, sig.emit_ts);
                if (outcome.retry) sender.on_retry();
            }
        }
    }
    REQUIRE(corrupted_once);
    REQUIRE(sender.message_complete());
    CHECK(receiver.stats().retries_sent == 1);
    const auto rm = receiver.finalize();
    REQUIRE(rm.message.has_value());
    CHECK(*rm.message == message); // retransmission healed the rejection
}

TEST_CASE("STOP finalizes; missing indices are reported") {
    // OOOD sequence numbers make the hole visible: drop the second-to-last
    // fragment's pointer so the final fragment still lands in-window.
    ChannelConfig cfg;
    cfg.inputsource = InputSource::Icd;
    cfg.bitlength = 4;
    cfg.epsilon_places = 6;
    cfg.oood_bits = 2;
    cfg.silence_ms = 0;

    std::mt19937_64 rng(111);
    const Bits message = random_bits(24, rng);
    Sender sender(cfg, message, SenderOptions{0, 0});
    Receiver receiver(cfg);
    sender.begin(0);
    receiver.on_signal(PointerSignal{SignalType::Start, 0, 0, 0, 0}, 0);
    sender.on_pdu(poi_at(0), true);

    const std::uint64_t drop_at = sender.fragment_count() - 1; // fragment K-2
    std::uint64_t data_seen = 0;
    Microseconds t = 0;
    for (int i = 0; i < 6000 && !sender.stopped(); ++i) {
        t += 1000 + static_cast<Microseconds>(rng() % 9000);
        const auto pdu = poi_at(t);
        receiver.on_pdu(pdu, true);
        for (const auto& sig : sender.on_pdu(pdu, true)) {
            if (sig.type == SignalType::Data && ++data_seen == drop_at) continue;
            receiver.on_signal(sig, sig.emit_ts);
        }
    }
    REQUIRE(sender.message_complete());
    CHECK(receiver.stats().stop_received);
    const auto rm = receiver.finalize();
    CHECK_FALSE(rm.message.has_value());
    CHECK(rm.missing_fragments.size() == 1);
}

TEST_CASE("protocol-state errors") {
    ChannelConfig cfg;
    cfg.inputsource = InputSource::Icd;
    std::mt19937_64 rng(1);
    Sender sender(cfg, random_bits(8, rng));
    CHECK_THROWS_AS(sender.on_pdu(poi_at(0), true), ProtocolError);

    Receiver receiver(cfg);
    PointerSignal data;
    data.type = SignalType::Data;
    CHECK_THROWS_AS(receiver.on_signal(data, 0, /*strict=*/true), ProtocolError);
    // Tolerant mode counts and drops.
    const auto outcome = receiver.on_signal(data, 0);
    CHECK(outcome.kind == SignalOutcome::Kind::Ignored);
    CHECK(receiver.stats().pre_start_signals == 1);

    CHECK_THROWS_AS(Sender(cfg, Bits{}), InvalidParameter);
}

TEST_CASE("in-window replayed pointer counts as duplicate, first copy kept") {
    // A replay is only recognizable while its index is still inside the
    // OOOD window: drop fragment 0's pointer so the window cannot advance,
    // then replay fragment 1's pointer.
    ChannelConfig cfg;
    cfg.inputsource = InputSource::Icd;
    cfg.bitlength = 4;
    cfg.epsilon_places = 6;
    cfg.oood_bits = 2;
    cfg.silence_ms = 0;

    std::mt19937_64 rng(13);
    const Bits message = random_bits(8, rng);
    Sender sender(cfg, message, SenderOptions{0, 0});
    Receiver receiver(cfg);
    sender.begin(0);
    receiver.on_signal(PointerSignal{SignalType::Start, 0, 0, 0, 0}, 0);
    sender.on_pdu(poi_at(0), true);

    Microseconds t = 0;
    std::uint64_t data_seen = 0;
    bool replayed = false;
    for (int i = 0; i < 3000 && !sender.stopped(); ++i) {
        t += 1000 + static_cast<Microseconds>(rng() % 9000);
        const auto pdu = poi_at(t);
        receiver.on_pdu(pdu, true);
        for (const auto& sig : sender.on_pdu(pdu, true)) {
            if (sig.type != SignalType::Data) {
                receiver.on_signal(sig, sig.emit_ts);
                continue;
            }
            ++data_seen;
            if (data_seen == 1) continue; // fragment 0's pointer lost
            const auto outcome = receiver.on_signal(sig, sig.emit_ts);
            if (!replayed && outcome.kind == SignalOutcome::Kind::Stored) {
                replayed = true;
                const auto dup = receiver.on_signal(sig, sig.emit_ts);
                CHECK(dup.kind == SignalOutcome::Kind::Stored);
            }
        }
    }
    REQUIRE(replayed);
    CHECK(receiver.stats().duplicates >= 1);
    const auto rm = receiver.finalize();
    CHECK(!rm.missing_fragments.empty()); // fragment 0 was never retried
}
