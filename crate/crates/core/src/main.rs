fn main() -> std::process::ExitCode {
    crm_precoder::cli::main_entry()
}
