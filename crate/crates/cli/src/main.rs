fn main() {
    println!("picard3 (under construction)");
}
