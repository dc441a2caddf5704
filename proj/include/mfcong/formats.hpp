#pragma once

#include <filesystem>
#include <string>

#include "mfcong/engine.hpp"
#include "mfcong/numberfield.hpp"
#include "mfcong/qseries.hpp"

namespace mfcong::formats {

inline constexpr char tool_version[] = "mfcong 1.0.0";

/* Field file: schema "mfcong-field/1". See docs/formats.md for the grammar. */
FieldPtr parse_field(std::string const& text);
FieldPtr load_field(std::filesystem::path const& path);

struct FormFile {
    std::string label;
    std::filesystem::path path;
    std::string digest;        // SHA-256 of the form file
    std::string field_digest;  // SHA-256 of a referenced field file, empty otherwise
    QExpansion form;
};

/* Form file: schema "mfcong-form/1". A field given by file name is resolved
 * relative to base_dir. */
FormFile parse_form(std::string const& text, std::filesystem::path const& base_dir);
FormFile load_form(std::filesystem::path const& path);

std::string serialize_certificate(CongruenceCertificate const& cert);
CongruenceCertificate parse_certificate(std::string const& text);

/* Writes through a temporary file and a rename, so readers never see a partial file. */
void write_file_atomic(std::filesystem::path const& path, std::string const& content);
std::string read_file(std::filesystem::path const& path);
std::string sha256_hex(std::string const& bytes);
std::string utc_timestamp();

}  // namespace mfcong::formats
