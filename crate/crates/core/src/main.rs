fn main() {
    std::process::exit(tdsharp::cli::run());
}
