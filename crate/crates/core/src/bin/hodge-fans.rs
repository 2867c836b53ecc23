fn main() {
    std::process::exit(hodge_fans::cli::cli_main(std::env::args_os()));
}
