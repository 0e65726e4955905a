fn main() {
    std::process::exit(lubin_tate::cli::run(std::env::args_os()));
}
