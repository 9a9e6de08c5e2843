fn main() {
    std::process::exit(amoeba_cli::run(std::env::args_os()));
}
