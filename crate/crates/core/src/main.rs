fn main() {
    std::process::exit(holonomy::cli::run(std::env::args_os()));
}
