fn main() {
    std::process::exit(netdiscern_cli::run(std::env::args_os()));
}
