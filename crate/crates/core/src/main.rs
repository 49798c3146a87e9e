fn main() {
    std::process::exit(lexchoice::cli::run(std::env::args_os()));
}
