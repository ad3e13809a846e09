#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vib2ecg/annotations.hpp"
#include "vib2ecg/binio.hpp"
#include "vib2ecg/common.hpp"
#include "vib2ecg/sigproc.hpp"
#include "vib2ecg/signal.hpp"

namespace vib2ecg {

inline constexpr std::size_t kSegmentLength = 3000;  // samples at 1000 Hz (3 s)
inline constexpr std::uint16_t kRecordingFormatVersion = 1;
inline constexpr std::uint16_t kDatasetFormatVersion = 1;

enum class Position : std::uint8_t { V1 = 0, V2, V3, V4, V5, V6 };
inline constexpr std::array<Position, 6> kAllPositions = {Position::V1, Position::V2, Position::V3,
                                                          Position::V4, Position::V5, Position::V6};

inline std::string to_string(Position p) {
    return "V" + std::to_string(static_cast<int>(p) + 1);
}

inline Position position_from_string(const std::string& s) {
    for (Position p : kAllPositions) {
        if (to_string(p) == s) return p;
    }
    throw InvalidSpecError("unknown chest position: " + s);
}

// One electrode/IMU pair at a chest position: colocated ECG and vibration.
struct PairedChannel {
    Position position = Position::V1;
    UniformSignal ecg;       // 1000 Hz, millivolt
    TimestampedSignal vib;   // nominal 500 Hz, selected accelerometer axis
};

struct Recording {
    std::string subject_id;
    int day_index = 0;
    std::vector<PairedChannel> channels;  // exactly one per position
    std::map<std::string, std::string> metadata;
};

// One aligned 3 s training example. All arrays have length kSegmentLength.
struct Segment {
    std::vector<float> scg;
    std::vector<float> pcgl;
    std::vector<float> raw;
    std::vector<float> ecg;
    Position position = Position::V1;
    std::int64_t segment_index = 0;
    Tick start_tick = 0;
    std::string subject_id;
    int day_index = 0;
};

struct SplitAssignment {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;
};

class SplitTooSmallError : public Error {
public:
    using Error::Error;
};

inline void validate(const PairedChannel& ch) {
    validate(ch.ecg);
    validate(ch.vib);
    require(ch.vib.timestamps.size() >= 2, "paired channel: vibration too short");
    const double e0 = ticks_to_seconds(ch.ecg.start_tick);
    const double e1 = e0 + duration_seconds(ch.ecg);
    const double v0 = ticks_to_seconds(ch.vib.timestamps.front());
    const double v1 = ticks_to_seconds(ch.vib.timestamps.back());
    const double overlap = std::min(e1, v1) - std::max(e0, v0);
    const double shorter = std::min(e1 - e0, v1 - v0);
    require(overlap >= 0.99 * shorter, "paired channel: ECG/vibration spans overlap < 99%");
}

inline void validate(const Recording& r) {
    require(!r.subject_id.empty(), "recording: subject id must be non-empty");
    require(r.day_index >= 0, "recording: day index must be non-negative");
    require(r.channels.size() == kAllPositions.size(),
            "recording: expected exactly six channels");
    std::array<int, 6> seen{};
    for (const auto& ch : r.channels) {
        seen[static_cast<int>(ch.position)]++;
        validate(ch);
    }
    for (int c : seen) require(c == 1, "recording: exactly one channel per position");
    for (const auto& ch : r.channels) {
        require(ch.ecg.start_tick == r.channels.front().ecg.start_tick,
                "recording: channels must share the tick epoch");
    }
}

inline const PairedChannel& channel_at(const Recording& r, Position p) {
    for (const auto& ch : r.channels) {
        if (ch.position == p) return ch;
    }
    throw InvalidSpecError("recording has no channel at " + to_string(p));
}

// ---------------------------------------------------------------------------
// On-disk recording layout: manifest.json plus one binary file per stream.
//
// Binary stream file, all fields little-endian:
//   magic 'VIB2' | version u16 | kind u8 (0 uniform, 1 timestamped) |
//   channel count u8 | sample count u64 |
//   uniform:      rate f64, start tick u64, samples f32[count]
//   timestamped:  per sample: tick u64, then one f32 per channel
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr char kStreamMagic[4] = {'V', 'I', 'B', '2'};

inline void write_uniform_stream(const std::filesystem::path& file, const UniformSignal& s) {
    std::ofstream os(file, std::ios::binary);
    if (!os) throw Error("cannot open for writing: " + file.string());
    binio::write_magic(os, kStreamMagic);
    binio::write_pod<std::uint16_t>(os, kRecordingFormatVersion);
    binio::write_pod<std::uint8_t>(os, 0);
    binio::write_pod<std::uint8_t>(os, 1);
    binio::write_pod<std::uint64_t>(os, s.samples.size());
    binio::write_pod<double>(os, s.rate);
    binio::write_pod<std::uint64_t>(os, s.start_tick);
    binio::write_f32s(os, s.samples);
    if (!os) throw Error("write failed: " + file.string());
}

// Multi-axis variant used by ingestion; axes[i] all share the tick column.
inline void write_timestamped_stream(const std::filesystem::path& file,
                                     const std::vector<Tick>& ticks,
                                     const std::vector<std::vector<float>>& axes,
                                     double nominal_rate) {
    require(!axes.empty() && axes.size() <= 255, "timestamped stream: 1..255 axes");
    for (const auto& a : axes)
        require(a.size() == ticks.size(), "timestamped stream: axis length mismatch");
    std::ofstream os(file, std::ios::binary);
    if (!os) throw Error("cannot open for writing: " + file.string());
    binio::write_magic(os, kStreamMagic);
    binio::write_pod<std::uint16_t>(os, kRecordingFormatVersion);
    binio::write_pod<std::uint8_t>(os, 1);
    binio::write_pod<std::uint8_t>(os, static_cast<std::uint8_t>(axes.size()));
    binio::write_pod<std::uint64_t>(os, ticks.size());
    binio::write_pod<double>(os, nominal_rate);
    for (std::size_t i = 0; i < ticks.size(); ++i) {
        binio::write_pod<std::uint64_t>(os, ticks[i]);
        for (const auto& a : axes) binio::write_pod<float>(os, a[i]);
    }
    if (!os) throw Error("write failed: " + file.string());
}

struct StreamHeader {
    std::uint8_t kind = 0;
    std::uint8_t channel_count = 0;
    std::uint64_t sample_count = 0;
};

inline StreamHeader read_stream_header(std::istream& is, const std::string& what) {
    binio::expect_magic(is, kStreamMagic, what);
    const auto version = binio::read_pod<std::uint16_t>(is);
    if (version != kRecordingFormatVersion)
        throw FormatError(what + ": unsupported version " + std::to_string(version));
    StreamHeader h;
    h.kind = binio::read_pod<std::uint8_t>(is);
    h.channel_count = binio::read_pod<std::uint8_t>(is);
    h.sample_count = binio::read_pod<std::uint64_t>(is);
    if (h.kind > 1) throw FormatError(what + ": unknown stream kind");
    if (h.channel_count == 0) throw FormatError(what + ": zero channels");
    return h;
}

inline UniformSignal read_uniform_stream(const std::filesystem::path& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw Error("cannot open: " + file.string());
    const auto h = read_stream_header(is, file.filename().string());
    if (h.kind != 0) throw FormatError(file.string() + ": expected a uniform stream");
    if (h.channel_count != 1) throw FormatError(file.string() + ": expected one channel");
    UniformSignal s;
    s.rate = binio::read_pod<double>(is);
    s.start_tick = binio::read_pod<std::uint64_t>(is);
    binio::read_f32s(is, s.samples, h.sample_count);
    return s;
}

inline TimestampedSignal read_timestamped_stream(const std::filesystem::path& file,
                                                 std::size_t axis) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw Error("cannot open: " + file.string());
    const auto h = read_stream_header(is, file.filename().string());
    if (h.kind != 1) throw FormatError(file.string() + ": expected a timestamped stream");
    if (axis >= h.channel_count)
        throw FormatError(file.string() + ": axis index out of range");
    TimestampedSignal s;
    s.nominal_rate = binio::read_pod<double>(is);
    s.timestamps.resize(h.sample_count);
    s.samples.resize(h.sample_count);
    std::vector<float> row(h.channel_count);
    for (std::uint64_t i = 0; i < h.sample_count; ++i) {
        s.timestamps[i] = binio::read_pod<std::uint64_t>(is);
        binio::read_bytes(is, row.data(), row.size() * sizeof(float));
        s.samples[i] = row[axis];
    }
    return s;
}

}  // namespace detail

inline void write_recording(const Recording& r, const std::filesystem::path& dir) {
    validate(r);
    std::filesystem::create_directories(dir);

    nlohmann::json manifest;
    manifest["format_version"] = kRecordingFormatVersion;
    manifest["subject_id"] = r.subject_id;
    manifest["day_index"] = r.day_index;
    manifest["tick_epoch"] = r.channels.front().ecg.start_tick;
    manifest["axis_labels"] = nlohmann::json::array({"dorsoventral"});
    manifest["vib_axis"] = 0;
    manifest["metadata"] = r.metadata;

    nlohmann::json channels = nlohmann::json::array();
    for (const auto& ch : r.channels) {
        const std::string pos = to_string(ch.position);
        detail::write_uniform_stream(dir / (pos + "_ecg.v2b"), ch.ecg);
        detail::write_timestamped_stream(dir / (pos + "_vib.v2b"), ch.vib.timestamps,
                                         {ch.vib.samples}, ch.vib.nominal_rate);
        channels.push_back({{"position", pos},
                            {"ecg_file", pos + "_ecg.v2b"},
                            {"ecg_rate", ch.ecg.rate},
                            {"vib_file", pos + "_vib.v2b"},
                            {"vib_nominal_rate", ch.vib.nominal_rate}});
    }
    manifest["channels"] = channels;

    std::ofstream os(dir / "manifest.json");
    if (!os) throw Error("cannot write manifest: " + (dir / "manifest.json").string());
    os << manifest.dump(2) << "\n";
}

inline Recording read_recording(const std::filesystem::path& dir) {
    std::ifstream is(dir / "manifest.json");
    if (!is) throw FormatError("missing manifest: " + (dir / "manifest.json").string());
    nlohmann::json manifest;
    try {
        is >> manifest;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("bad manifest json: " + std::string(e.what()));
    }
    if (manifest.at("format_version").get<int>() != kRecordingFormatVersion)
        throw FormatError("unsupported recording format version");

    Recording r;
    r.subject_id = manifest.at("subject_id").get<std::string>();
    r.day_index = manifest.at("day_index").get<int>();
    if (manifest.contains("metadata"))
        r.metadata = manifest["metadata"].get<std::map<std::string, std::string>>();
    const std::size_t axis = manifest.value("vib_axis", 0);

    for (const auto& jch : manifest.at("channels")) {
        PairedChannel ch;
        ch.position = position_from_string(jch.at("position").get<std::string>());
        ch.ecg = detail::read_uniform_stream(dir / jch.at("ecg_file").get<std::string>());
        ch.vib = detail::read_timestamped_stream(dir / jch.at("vib_file").get<std::string>(), axis);
        r.channels.push_back(std::move(ch));
    }
    validate(r);
    return r;
}

// ---------------------------------------------------------------------------
// Segmentation and the temporal split
// ---------------------------------------------------------------------------

// Channel after the full preprocessing chain, everything on the ECG grid.
struct PreparedChannel {
    Position position = Position::V1;
    UniformSignal ecg;   // filtered ECG
    UniformSignal raw;   // aligned, un-decomposed vibration
    UniformSignal scg;   // 2-20 Hz band
    UniformSignal pcgl;  // >20 Hz band
    std::string subject_id;
    int day_index = 0;
};

inline PreparedChannel prepare_channel(const Recording& r, Position position) {
    const PairedChannel& ch = channel_at(r, position);
    PreparedChannel out;
    out.position = position;
    out.subject_id = r.subject_id;
    out.day_index = r.day_index;
    out.ecg = preprocess_ecg(ch.ecg);
    out.raw = align_to_ecg(ch.vib, sample_ticks(out.ecg));
    auto bands = decompose_vibration(out.raw);
    out.scg = std::move(bands.scg);
    out.pcgl = std::move(bands.pcgl);
    return out;
}

namespace detail {

inline std::vector<float> zscore_window(const UniformSignal& s, std::size_t start) {
    UniformSignal w;
    w.rate = s.rate;
    w.samples.assign(s.samples.begin() + start, s.samples.begin() + start + kSegmentLength);
    return normalize(w).samples;
}

}  // namespace detail

// Cut windows of kSegmentLength at the given stride over [0, limit).
// Inputs are z-scored per window; the ECG target is divided by ecg_scale.
inline std::vector<Segment> window_segments(const PreparedChannel& ch, std::size_t stride,
                                            double ecg_scale = 1.0,
                                            std::size_t limit = SIZE_MAX) {
    require(stride >= 1, "window_segments: stride must be >= 1");
    const std::size_t n = std::min(ch.ecg.samples.size(), limit);
    std::vector<Segment> out;
    if (n < kSegmentLength) return out;
    const float inv_scale = static_cast<float>(1.0 / ecg_scale);
    std::int64_t index = 0;
    for (std::size_t start = 0; start + kSegmentLength <= n; start += stride, ++index) {
        Segment seg;
        seg.position = ch.position;
        seg.subject_id = ch.subject_id;
        seg.day_index = ch.day_index;
        seg.segment_index = index;
        seg.start_tick = sample_tick(ch.ecg, start);
        seg.scg = detail::zscore_window(ch.scg, start);
        seg.pcgl = detail::zscore_window(ch.pcgl, start);
        seg.raw = detail::zscore_window(ch.raw, start);
        seg.ecg.assign(ch.ecg.samples.begin() + start,
                       ch.ecg.samples.begin() + start + kSegmentLength);
        for (float& v : seg.ecg) v *= inv_scale;
        out.push_back(std::move(seg));
    }
    return out;
}

inline std::vector<Segment> segment_recording(const Recording& r, Position position,
                                              std::size_t stride) {
    return window_segments(prepare_channel(r, position), stride);
}

inline SplitAssignment temporal_split_count(std::size_t n) {
    if (n < 10) throw SplitTooSmallError("temporal split needs at least 10 segments, got " +
                                         std::to_string(n));
    const std::size_t n_train = (7 * n) / 10;
    const std::size_t n_val = n / 10;
    SplitAssignment s;
    for (std::size_t i = 0; i < n_train; ++i) s.train.push_back(i);
    for (std::size_t i = n_train; i < n_train + n_val; ++i) s.validation.push_back(i);
    for (std::size_t i = n_train + n_val; i < n; ++i) s.test.push_back(i);
    return s;
}

inline SplitAssignment temporal_split(const std::vector<Segment>& segments) {
    return temporal_split_count(segments.size());
}

// ---------------------------------------------------------------------------
// Segment dataset: the training-ready product of one (recording, position)
// ---------------------------------------------------------------------------

struct SegmentDataset {
    std::string subject_id;
    int day_index = 0;
    Position position = Position::V1;
    double ecg_scale = 1.0;
    std::size_t train_stride = kSegmentLength / 2;
    std::vector<Segment> train;
    std::vector<Segment> validation;
    std::vector<Segment> test;
    std::optional<BeatAnnotations> annotations;  // generator ground truth, if any
};

namespace detail {

inline double percentile_abs(const std::vector<float>& v, std::size_t n, double q) {
    std::vector<float> mags;
    mags.reserve(n);
    for (std::size_t i = 0; i < n; ++i) mags.push_back(std::abs(v[i]));
    std::sort(mags.begin(), mags.end());
    const std::size_t idx =
        static_cast<std::size_t>(std::llround(q * static_cast<double>(n - 1)));
    return mags[idx];
}

}  // namespace detail

// Split first on non-overlapping windows, then re-cut the training span at
// train_stride for augmentation. The target scale comes from the training
// portion only, so validation/test never leak into it.
inline SegmentDataset build_dataset(const Recording& r, Position position,
                                    std::size_t train_stride = kSegmentLength / 2,
                                    std::optional<BeatAnnotations> annotations = std::nullopt) {
    const PreparedChannel ch = prepare_channel(r, position);
    const std::size_t n_windows = ch.ecg.samples.size() / kSegmentLength;
    const SplitAssignment split = temporal_split_count(n_windows);

    const std::size_t train_end_sample = split.train.size() * kSegmentLength;
    double scale = detail::percentile_abs(ch.ecg.samples, train_end_sample, 0.95);
    if (scale < 1e-12) scale = 1.0;

    SegmentDataset ds;
    ds.subject_id = ch.subject_id;
    ds.day_index = ch.day_index;
    ds.position = position;
    ds.ecg_scale = scale;
    ds.train_stride = train_stride;
    ds.annotations = std::move(annotations);

    ds.train = window_segments(ch, train_stride, scale, train_end_sample);
    const auto canonical = window_segments(ch, kSegmentLength, scale);
    for (std::size_t i : split.validation) ds.validation.push_back(canonical[i]);
    for (std::size_t i : split.test) ds.test.push_back(canonical[i]);
    return ds;
}

// ---------------------------------------------------------------------------
// Dataset directory: meta.json + segments.v2s
//   magic 'V2SG' | version u16 | segment length u32 |
//   train/val/test counts u64 each | segments (train, then val, then test):
//   segment_index i64, start_tick u64, scg/pcgl/raw/ecg f32[segment length]
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr char kDatasetMagic[4] = {'V', '2', 'S', 'G'};

inline void write_segment(std::ostream& os, const Segment& s) {
    binio::write_pod<std::int64_t>(os, s.segment_index);
    binio::write_pod<std::uint64_t>(os, s.start_tick);
    binio::write_f32s(os, s.scg);
    binio::write_f32s(os, s.pcgl);
    binio::write_f32s(os, s.raw);
    binio::write_f32s(os, s.ecg);
}

inline Segment read_segment(std::istream& is, const SegmentDataset& ds) {
    Segment s;
    s.position = ds.position;
    s.subject_id = ds.subject_id;
    s.day_index = ds.day_index;
    s.segment_index = binio::read_pod<std::int64_t>(is);
    s.start_tick = binio::read_pod<std::uint64_t>(is);
    binio::read_f32s(is, s.scg, kSegmentLength);
    binio::read_f32s(is, s.pcgl, kSegmentLength);
    binio::read_f32s(is, s.raw, kSegmentLength);
    binio::read_f32s(is, s.ecg, kSegmentLength);
    return s;
}

}  // namespace detail

inline void write_dataset(const SegmentDataset& ds, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);

    nlohmann::json meta;
    meta["format_version"] = kDatasetFormatVersion;
    meta["subject_id"] = ds.subject_id;
    meta["day_index"] = ds.day_index;
    meta["position"] = to_string(ds.position);
    meta["ecg_scale"] = ds.ecg_scale;
    meta["train_stride"] = ds.train_stride;
    meta["counts"] = {{"train", ds.train.size()},
                      {"validation", ds.validation.size()},
                      {"test", ds.test.size()}};
    std::ofstream ms(dir / "meta.json");
    if (!ms) throw Error("cannot write dataset meta");
    ms << meta.dump(2) << "\n";

    if (ds.annotations) {
        std::ofstream as(dir / "annotations.json");
        as << to_json(*ds.annotations).dump() << "\n";
    }

    std::ofstream os(dir / "segments.v2s", std::ios::binary);
    if (!os) throw Error("cannot write dataset segments");
    binio::write_magic(os, detail::kDatasetMagic);
    binio::write_pod<std::uint16_t>(os, kDatasetFormatVersion);
    binio::write_pod<std::uint32_t>(os, kSegmentLength);
    binio::write_pod<std::uint64_t>(os, ds.train.size());
    binio::write_pod<std::uint64_t>(os, ds.validation.size());
    binio::write_pod<std::uint64_t>(os, ds.test.size());
    for (const auto& s : ds.train) detail::write_segment(os, s);
    for (const auto& s : ds.validation) detail::write_segment(os, s);
    for (const auto& s : ds.test) detail::write_segment(os, s);
    if (!os) throw Error("dataset write failed");
}

inline SegmentDataset read_dataset(const std::filesystem::path& dir) {
    std::ifstream ms(dir / "meta.json");
    if (!ms) throw FormatError("missing dataset meta: " + (dir / "meta.json").string());
    nlohmann::json meta;
    try {
        ms >> meta;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("bad dataset meta: " + std::string(e.what()));
    }
    if (meta.at("format_version").get<int>() != kDatasetFormatVersion)
        throw FormatError("unsupported dataset format version");

    SegmentDataset ds;
    ds.subject_id = meta.at("subject_id").get<std::string>();
    ds.day_index = meta.at("day_index").get<int>();
    ds.position = position_from_string(meta.at("position").get<std::string>());
    ds.ecg_scale = meta.at("ecg_scale").get<double>();
    ds.train_stride = meta.at("train_stride").get<std::size_t>();

    if (std::filesystem::exists(dir / "annotations.json")) {
        std::ifstream as(dir / "annotations.json");
        nlohmann::json j;
        as >> j;
        ds.annotations = annotations_from_json(j);
    }

    std::ifstream is(dir / "segments.v2s", std::ios::binary);
    if (!is) throw FormatError("missing dataset segments");
    binio::expect_magic(is, detail::kDatasetMagic, "segments.v2s");
    if (binio::read_pod<std::uint16_t>(is) != kDatasetFormatVersion)
        throw FormatError("segments.v2s: unsupported version");
    if (binio::read_pod<std::uint32_t>(is) != kSegmentLength)
        throw FormatError("segments.v2s: unexpected segment length");
    const auto n_train = binio::read_pod<std::uint64_t>(is);
    const auto n_val = binio::read_pod<std::uint64_t>(is);
    const auto n_test = binio::read_pod<std::uint64_t>(is);
    for (std::uint64_t i = 0; i < n_train; ++i) ds.train.push_back(detail::read_segment(is, ds));
    for (std::uint64_t i = 0; i < n_val; ++i) ds.validation.push_back(detail::read_segment(is, ds));
    for (std::uint64_t i = 0; i < n_test; ++i) ds.test.push_back(detail::read_segment(is, ds));
    return ds;
}

}  // namespace vib2ecg
