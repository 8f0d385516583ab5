package model;

public record Point(int x, int y) implements Comparable<Point> {
    public Point {
        if (x < 0 || y < 0) {
            throw new IllegalArgumentException("negative");
        }
    }

    public int manhattan() {
        return Math.abs(x) + Math.abs(y);
    }

    @Override
    public int compareTo(Point other) {
        return Integer.compare(manhattan(), other.manhattan());
    }
}
