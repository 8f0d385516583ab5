package b;

public class Foo {
    public int compute(int x) { return x - 1; }
}
