fn main() {
    std::process::exit(kgdecomp::cli::run(std::env::args_os()));
}
