fn main() {
    std::process::exit(ctmn::cli::run(std::env::args_os()));
}
