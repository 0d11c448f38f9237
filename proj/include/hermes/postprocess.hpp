#pragma once

#include "hermes/plugins.hpp"
#include "hermes/receipt.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace hermes {

// Writes the receipt's record id into deposit.<target>.record_id of the
// configuration file. Format preserving: comments, key order and unrelated
// lines stay untouched; writing the value already present leaves the file
// byte-identical.
void store_record_id(const std::filesystem::path& config_path, const DepositReceipt& receipt);

// Records the receipt's DOI in the citation file: the top-level doi key is
// set to the new DOI and the identifiers list gains it; a previous DOI is
// kept in identifiers rather than discarded.
void insert_doi_cff(const std::filesystem::path& cff_path, const DepositReceipt& receipt);

// "10.5281/zenodo.123" from either a bare DOI or a https://doi.org/ URL;
// nullopt when the input is not DOI-shaped.
std::optional<std::string> normalize_doi(const std::string& pid);

// ------------------------------------------------------- plugin adapters

class ConfigRecordIdPlugin : public PostprocessPlugin {
public:
    void run(ExecutionContext& ctx, const DepositReceipt& receipt) override;
};

class CffDoiPlugin : public PostprocessPlugin {
public:
    void run(ExecutionContext& ctx, const DepositReceipt& receipt) override;
};

} // namespace hermes
