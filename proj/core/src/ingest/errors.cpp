#include "gelab/ingest/errors.hpp"

namespace gelab::ingest {

const char* to_string(IngestErrc e) {
  switch (e) {
    case IngestErrc::InvalidConfig: return "InvalidConfig";
    case IngestErrc::HttpError: return "HttpError";
    case IngestErrc::ParseError: return "ParseError";
    case IngestErrc::UnknownItem: return "UnknownItem";
    case IngestErrc::SchemaError: return "SchemaError";
    case IngestErrc::DuplicateKey: return "DuplicateKey";
    case IngestErrc::NonPositivePrice: return "NonPositivePrice";
    case IngestErrc::EmptySeries: return "EmptySeries";
    case IngestErrc::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace gelab::ingest
