#include "hermes/deposit.hpp"
#include "hermes/errors.hpp"
#include "hermes/util.hpp"

namespace hermes {

DepositReceipt deposit_file(const std::string& record_bytes,
                            const std::filesystem::path& filename) {
    util::write_file_atomic(filename, record_bytes);

    DepositReceipt receipt;
    receipt.target = "file";
    receipt.uploaded_files.emplace_back(filename.string(), record_bytes.size());
    receipt.published_at = util::now_utc();
    return receipt;
}

DepositReceipt FileDepositPlugin::deposit(ExecutionContext& ctx, const MetadataRecord& record,
                                          const std::string& record_bytes, bool curated) {
    (void)record;
    std::filesystem::path filename = ctx.config().deposit_file_filename;
    if (filename.is_relative()) {
        filename = ctx.working_dir() / filename;
    }
    DepositReceipt receipt = deposit_file(record_bytes, filename);
    receipt.curated = curated;
    ctx.log().info("deposit.file", "wrote " + filename.string());
    return receipt;
}

} // namespace hermes
