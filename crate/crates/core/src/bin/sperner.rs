use std::io::Write;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let (code, out, err) = sperner::cli::run(&args);
    if !out.is_empty() {
        print!("{out}");
    }
    if !err.is_empty() {
        let _ = writeln!(std::io::stderr(), "{err}");
    }
    std::process::exit(code);
}
