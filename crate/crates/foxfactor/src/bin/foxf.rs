fn main() {
    let (code, out) = foxfactor::cli::run_command(std::env::args().skip(1));
    if !out.is_empty() {
        if code == 0 {
            println!("{}", out.trim_end());
        } else {
            eprintln!("{}", out.trim_end());
        }
    }
    std::process::exit(code);
}
