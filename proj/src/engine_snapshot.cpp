#include <algorithm>
#include <array>
#include <fstream>

#include "mms/engine.hpp"
#include "mms/serialize.hpp"

namespace mms {

// Snapshot layout:
//   magic "MMSSNAP\0" | u32 version | u32 section_count
//   per section: u32 tag | u64 payload_size | u32 crc32(payload) | payload
// Sections appear in kSectionTags order. The engine digest is an FNV-1a
// over (tag, payload bytes) in the same order, so two engines with equal
// digests serialize to identical snapshots.

namespace {

constexpr char kMagic[8] = {'M', 'M', 'S', 'S', 'N', 'A', 'P', '\0'};
constexpr uint32_t kVersion = 1;

enum SectionTag : uint32_t {
  kSectionConfig = 1,
  kSectionMeta = 2,
  kSectionDocs = 3,
  kSectionKeyword = 4,
  kSectionSparse = 5,
  kSectionGraph = 6,
  kSectionIntents = 7,
};

constexpr std::array<uint32_t, 7> kSectionTags = {
    kSectionConfig, kSectionMeta,  kSectionDocs,    kSectionKeyword,
    kSectionSparse, kSectionGraph, kSectionIntents,
};

void save_doc(ByteWriter& w, const StoredDoc& doc) {
  w.put_string(doc.id);
  w.put_string(doc.title);
  w.put_i64(doc.date_days);
  w.put_u64(doc.impressions);
  w.put_u64(doc.clicks);
  w.put_u64(doc.edits);
  w.put_u64(doc.exports);
  w.put_u64(doc.intent_ids.size());
  for (const auto& id : doc.intent_ids) w.put_string(id);
  w.put_u64(doc.dense.size());
  for (const auto& values : doc.dense) {
    w.put_u64(values.size());
    for (float v : values) w.put_f32(v);
  }
  w.put_string(doc.sparse.space);
  w.put_u64(doc.sparse.entries.size());
  for (const auto& e : doc.sparse.entries) {
    w.put_u32(e.dim);
    w.put_f64(e.weight);
  }
}

StoredDoc load_doc(ByteReader& r) {
  StoredDoc doc;
  doc.id = r.get_string();
  doc.title = r.get_string();
  doc.date_days = r.get_i64();
  doc.impressions = r.get_u64();
  doc.clicks = r.get_u64();
  doc.edits = r.get_u64();
  doc.exports = r.get_u64();
  uint64_t n_intents = r.get_u64();
  for (uint64_t i = 0; i < n_intents; ++i) doc.intent_ids.push_back(r.get_string());
  uint64_t n_spaces = r.get_u64();
  doc.dense.resize(n_spaces);
  for (uint64_t i = 0; i < n_spaces; ++i) {
    uint64_t n = r.get_u64();
    doc.dense[i].reserve(n);
    for (uint64_t k = 0; k < n; ++k) doc.dense[i].push_back(r.get_f32());
  }
  doc.sparse.space = r.get_string();
  uint64_t n_entries = r.get_u64();
  for (uint64_t i = 0; i < n_entries; ++i) {
    SparseEntry e;
    e.dim = r.get_u32();
    e.weight = r.get_f64();
    doc.sparse.entries.push_back(e);
  }
  return doc;
}

}  // namespace

void Engine::serialize_section(uint32_t tag, ByteWriter& w) const {
  switch (tag) {
    case kSectionConfig:
      w.put_string(config_.to_json_text());
      break;
    case kSectionMeta:
      w.put_i64(reference_days_);
      break;
    case kSectionDocs:
      w.put_u64(docs_.size());
      for (const auto& doc : docs_) save_doc(w, doc);
      break;
    case kSectionKeyword:
      keyword_.save(w);
      break;
    case kSectionSparse:
      sparse_.save(w);
      break;
    case kSectionGraph:
      graph_.save(w);
      break;
    case kSectionIntents:
      intents_.save(w);
      break;
    default:
      fail(ErrorCode::Internal, "unknown snapshot section tag");
  }
}

uint64_t Engine::compute_digest() const {
  ByteWriter w(ByteWriter::Mode::HashOnly);
  for (uint32_t tag : kSectionTags) {
    w.put_u32(tag);
    serialize_section(tag, w);
  }
  return w.hash();
}

std::string Engine::digest() const {
  require_ready();
  return to_hex(digest_);
}

void Engine::save_snapshot(const std::string& path) const {
  require_ready();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot write snapshot file '" + path + "'");

  ByteWriter header;
  header.put_raw(kMagic, sizeof(kMagic));
  header.put_u32(kVersion);
  header.put_u32(static_cast<uint32_t>(kSectionTags.size()));
  out.write(header.bytes().data(), static_cast<std::streamsize>(header.bytes().size()));

  for (uint32_t tag : kSectionTags) {
    ByteWriter payload;
    serialize_section(tag, payload);
    const std::string& bytes = payload.bytes();

    ByteWriter section_header;
    section_header.put_u32(tag);
    section_header.put_u64(bytes.size());
    section_header.put_u32(crc32(bytes.data(), bytes.size()));
    out.write(section_header.bytes().data(),
              static_cast<std::streamsize>(section_header.bytes().size()));
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
  if (!out) fail(ErrorCode::Io, "failed writing snapshot file '" + path + "'");
}

Engine Engine::load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open snapshot file '" + path + "'");
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (data.size() < sizeof(kMagic) + 8 ||
      std::memcmp(data.data(), kMagic, sizeof(kMagic)) != 0) {
    fail(ErrorCode::CorruptSnapshot, "'" + path + "' is not an engine snapshot");
  }
  ByteReader header(std::string_view(data).substr(sizeof(kMagic)));
  uint32_t version = header.get_u32();
  if (version != kVersion) {
    fail(ErrorCode::VersionMismatch, "snapshot version " + std::to_string(version) +
                                         " is not supported (expected " +
                                         std::to_string(kVersion) + ")");
  }
  uint32_t section_count = header.get_u32();
  if (section_count != kSectionTags.size()) {
    fail(ErrorCode::CorruptSnapshot, "unexpected snapshot section count");
  }

  std::array<std::string_view, kSectionTags.size()> payloads;
  size_t pos = sizeof(kMagic) + 8;
  for (size_t i = 0; i < kSectionTags.size(); ++i) {
    if (pos + 16 > data.size()) fail(ErrorCode::CorruptSnapshot, "snapshot data truncated");
    ByteReader sh(std::string_view(data).substr(pos, 16));
    uint32_t tag = sh.get_u32();
    uint64_t size = sh.get_u64();
    uint32_t crc = sh.get_u32();
    pos += 16;
    if (tag != kSectionTags[i]) fail(ErrorCode::CorruptSnapshot, "snapshot sections out of order");
    if (pos + size > data.size()) fail(ErrorCode::CorruptSnapshot, "snapshot data truncated");
    std::string_view payload = std::string_view(data).substr(pos, size);
    if (crc32(payload.data(), payload.size()) != crc) {
      fail(ErrorCode::CorruptSnapshot, "snapshot section checksum failure");
    }
    payloads[i] = payload;
    pos += size;
  }
  if (pos != data.size()) fail(ErrorCode::CorruptSnapshot, "trailing bytes after snapshot");

  ByteReader config_reader(payloads[0]);
  EngineConfig config = EngineConfig::from_json_text(config_reader.get_string());

  ByteReader graph_reader(payloads[5]);
  IntentGraph graph = IntentGraph::load(graph_reader);

  Engine engine(std::move(config), std::move(graph));

  ByteReader meta_reader(payloads[1]);
  engine.reference_days_ = meta_reader.get_i64();

  ByteReader docs_reader(payloads[2]);
  uint64_t n_docs = docs_reader.get_u64();
  engine.docs_.reserve(n_docs);
  for (uint64_t i = 0; i < n_docs; ++i) {
    StoredDoc doc = load_doc(docs_reader);
    if (doc.dense.size() != engine.config_.spaces.size()) {
      fail(ErrorCode::CorruptSnapshot, "document embeddings do not match the space catalog");
    }
    engine.id_to_ordinal_.emplace(doc.id, static_cast<uint32_t>(i));
    engine.docs_.push_back(std::move(doc));
  }

  ByteReader keyword_reader(payloads[3]);
  engine.keyword_ = KeywordIndex::load(keyword_reader);
  ByteReader sparse_reader(payloads[4]);
  engine.sparse_ = SparseIndex::load(sparse_reader);
  ByteReader intents_reader(payloads[6]);
  engine.intents_ = IntentPostings::load(intents_reader);

  if (engine.keyword_.doc_count() != engine.docs_.size() ||
      engine.sparse_.doc_count() != engine.docs_.size()) {
    fail(ErrorCode::CorruptSnapshot, "index document counts do not match the corpus");
  }

  engine.built_ = true;
  engine.digest_ = engine.compute_digest();
  return engine;
}

}  // namespace mms
