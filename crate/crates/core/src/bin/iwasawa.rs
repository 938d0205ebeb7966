fn main() {
    std::process::exit(iwasawa::cli::main_with_args(std::env::args_os()));
}
