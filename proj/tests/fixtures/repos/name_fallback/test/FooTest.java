import org.junit.Test;
import static org.junit.Assert.*;

public class FooTest {
    @Test
    public void testCompute() {
        Foo foo = new Foo(2);
        assertEquals(6, foo.compute(3));
    }
}
